#pragma once

#include "catent/error.hpp"
#include "catent/exact_matrix.hpp"
#include "catent/exact_poly.hpp"
#include "catent/root_moduli.hpp"
#include "catent/exact_linalg.hpp"
#include "catent/growth_estimator.hpp"
#include "catent/sl2z_dynamics.hpp"
#include "catent/variety_dynamics.hpp"
#include "catent/twist_zoo.hpp"
#include "catent/quiver_hereditary.hpp"

namespace catent {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace catent
