#pragma once

#include "tnn/core_model.hpp"
#include "tnn/double_flow.hpp"
#include "tnn/errors.hpp"
#include "tnn/flows.hpp"
#include "tnn/inequality.hpp"
#include "tnn/io.hpp"
#include "tnn/matrix.hpp"
#include "tnn/network.hpp"
#include "tnn/parallel.hpp"
#include "tnn/random.hpp"
#include "tnn/rational.hpp"
#include "tnn/selftest.hpp"
#include "tnn/witness.hpp"
