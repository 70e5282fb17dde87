#pragma once

#include "tnn/core_model.hpp"
#include "tnn/matrix.hpp"

namespace tnn {

// Σ_A mult·Δ(XA|X'A')Δ(XĀ|X'Ā') for one family.
inline Rational quadratic_sum(const Matrix& q, const Context& ctx, const Family& fam) {
    if (q.rows() != ctx.n() || q.cols() != ctx.n_prime())
        throw DimensionError("matrix is " + std::to_string(q.rows()) + "x" + std::to_string(q.cols()) +
                             ", context expects " + std::to_string(ctx.n()) + "x" +
                             std::to_string(ctx.n_prime()));
    Rational sum = 0;
    for (const auto& e : fam) {
        const Rational term = minor(q, rows_of(ctx, e.pair), cols_of(ctx, e.pair)) *
                              minor(q, rows_of_complement(ctx, e.pair), cols_of_complement(ctx, e.pair));
        sum += term * Rational(static_cast<unsigned long>(e.multiplicity));
    }
    return sum;
}

// Left-hand side of the quadratic inequality: A-part minus B-part.
inline Rational evaluate_inequality(const Matrix& q, const Context& ctx, const Family& a, const Family& b) {
    return quadratic_sum(q, ctx, a) - quadratic_sum(q, ctx, b);
}

} // namespace tnn
