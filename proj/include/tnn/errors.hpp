#pragma once

#include <stdexcept>
#include <string>

namespace tnn {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define TNN_DEFINE_ERROR(Name)                  \
    class Name : public Error {                 \
    public:                                     \
        explicit Name(const std::string& what)  \
            : Error(#Name ": " + what) {}       \
    }

// Context / pair validation.
TNN_DEFINE_ERROR(OverlapError);
TNN_DEFINE_ERROR(BalanceError);
TNN_DEFINE_ERROR(EmptyYError);
TNN_DEFINE_ERROR(RangeError);
TNN_DEFINE_ERROR(NotProperError);
TNN_DEFINE_ERROR(NotSubsetError);

// Linear algebra and networks.
TNN_DEFINE_ERROR(SizeMismatchError);
TNN_DEFINE_ERROR(DimensionError);
TNN_DEFINE_ERROR(InvalidNetworkError);
TNN_DEFINE_ERROR(NegativeWeightError);
TNN_DEFINE_ERROR(StructureError);

// Witness construction.
TNN_DEFINE_ERROR(ConstructionFailure);
TNN_DEFINE_ERROR(InfeasibleMatchingError);
TNN_DEFINE_ERROR(IsUniversalError);

// Serialization.
TNN_DEFINE_ERROR(ParseError);

#undef TNN_DEFINE_ERROR

} // namespace tnn
