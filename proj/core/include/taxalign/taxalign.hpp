#pragma once

#include "taxalign/candidates.hpp"
#include "taxalign/constraints.hpp"
#include "taxalign/error.hpp"
#include "taxalign/evaluation.hpp"
#include "taxalign/relaxation.hpp"
#include "taxalign/taxonomy.hpp"
#include "taxalign/weights.hpp"

namespace taxalign {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace taxalign
