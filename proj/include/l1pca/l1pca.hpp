#ifndef L1PCA_L1PCA_HPP
#define L1PCA_L1PCA_HPP

#include "l1pca/candidates.hpp"
#include "l1pca/errors.hpp"
#include "l1pca/heuristics.hpp"
#include "l1pca/io.hpp"
#include "l1pca/numerics.hpp"
#include "l1pca/parallel.hpp"
#include "l1pca/solver_multi.hpp"
#include "l1pca/solver_single.hpp"

#endif  // L1PCA_L1PCA_HPP
