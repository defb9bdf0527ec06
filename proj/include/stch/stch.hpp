#ifndef STCH_STCH_HPP
#define STCH_STCH_HPP

#include "stch/core.hpp"
#include "stch/io.hpp"
#include "stch/metrics/archive.hpp"
#include "stch/metrics/dominance.hpp"
#include "stch/metrics/hypervolume.hpp"
#include "stch/problems/catalog.hpp"
#include "stch/problems/engineering.hpp"
#include "stch/problems/problem.hpp"
#include "stch/problems/reference_front.hpp"
#include "stch/problems/synthetic.hpp"
#include "stch/psl/mlp.hpp"
#include "stch/psl/preferences.hpp"
#include "stch/psl/train.hpp"
#include "stch/solvers/min_norm.hpp"
#include "stch/solvers/solve.hpp"

#endif  // STCH_STCH_HPP
