#pragma once

#include <string>
#include <vector>

#include "wbk/fredholm.hpp"
#include "wbk/poly.hpp"

namespace wbk {

// Verification harness for the coupled endpoint PDE system and the
// Hamiltonian structure on multi-interval configurations.  Everything here
// is read-only over resolvent data: left sides come from centered finite
// differences of resolvent_quantities in the endpoints, right sides from
// the same quantities at the center.

struct PdeResidualReport {
  struct Family {
    std::string name;
    double residual;  // max abs residual over all applicable (j, k, i)
  };
  std::vector<Family> families;

  double max_residual() const;
  const Family& family(const std::string& name) const;
};

PdeResidualReport pde_residuals(const ScaledKernel& K, const IntervalUnion& J, int order,
                                double h);

CanonicalCoords canonical_coords(const ResolventQuantities& rq);

// H_k evaluated at solved coordinates (realized with parity quadrants).
double hamiltonian(const ScaledKernel& K, const CanonicalCoords& coords, int k);

// {H_i, H_j} at solved coordinates; zero in exact arithmetic.
double involution_check(const ScaledKernel& K, const CanonicalCoords& coords, int i, int j);

// max residual of the canonical equations d(coord)/da_i = {coord, H_i}
// against centered finite differences of the resolvent data.
double hamilton_equations_residual(const ScaledKernel& K, const IntervalUnion& J, int order,
                                   double h);

}  // namespace wbk
