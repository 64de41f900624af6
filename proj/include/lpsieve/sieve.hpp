#pragma once

// List sieve in the Euclidean norm.
//
// Stage one builds a reduction list L of lattice vectors from perturbed
// samples.  Stage two maps fresh samples y, drawn uniformly from the ball of
// radius xi * mu, to lattice vectors through the deterministic reducer:
// y is replaced by its fractional remainder modulo the lattice, the
// remainder is reduced against +-L while its length strictly decreases, and
// y is subtracted again, which lands on a lattice point.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lpsieve/core.hpp"
#include "lpsieve/rng.hpp"

namespace lpsieve {

struct SieveParams {
  double epsilon = 0.1;
  // Sampling radius factor: samples are uniform in (xi * mu) B_2.
  double xi = 0.9476;
  // Output radius factor used for harvest statistics and guarantees.
  double c = 3.0;
  // Guess on the length of the target vector.
  Scalar mu{1};
  std::size_t list_cap = std::size_t{1} << 16;
  std::uint64_t seed = 0;
  // Stage-one vectors shorter than this are not appended; xi * mu if unset.
  std::optional<double> insert_threshold;
  // Stage-one sample count; zero selects default_list_samples().
  std::size_t list_samples = 0;

  void validate() const;
  double radius() const { return xi * mu.get_d(); }
  double threshold() const { return insert_threshold.value_or(radius()); }
};

// ceil(2^{(0.401 + eps) n}), the list-size bound.
std::size_t kissing_bound(double epsilon, std::size_t n);
std::size_t default_list_samples(double epsilon, std::size_t n);

class SieveList {
 public:
  struct Entry {
    LatticeVector vector;
    std::vector<double> approx;
    double sq_norm;
  };

  // Appends v unless it is zero or v or -v is already present.
  bool append(LatticeVector v);
  // True if v or -v is in the list.
  bool contains(LatticeVector const& v) const;

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  LatticeVector const& operator[](std::size_t i) const {
    return entries_[i].vector;
  }
  std::span<Entry const> entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
};

// y - sum floor(lambda_i) b_i where y = sum lambda_i b_i.  Coordinates of
// the result lie in [0, 1) and the result is invariant under lattice shifts.
RatVec mod_lattice(std::span<Scalar const> y, Basis const& basis);

// Uniform in radius * B_2^n.  The double sample is converted exactly, and
// samples whose rational norm exceeds the radius are redrawn.
RatVec sample_ball(double radius, std::size_t n, Rng& rng);

struct ListReduction {
  LatticeVector result;
  RatVec start_remainder;
  RatVec final_remainder;
  // Exact squared length of the working remainder, initially and after every
  // accepted step.
  std::vector<Scalar> sq_norms;
};

ListReduction list_reduce_traced(std::span<Scalar const> y,
                                 SieveList const& list, Basis const& basis);
LatticeVector list_reduce(std::span<Scalar const> y, SieveList const& list,
                          Basis const& basis);

// Throws ListCapExceeded when the list would grow past params.list_cap.
SieveList build_list(Basis const& basis, SieveParams const& params, Rng& rng);

struct SieveRun {
  SieveList list;
  std::vector<LatticeVector> candidates;
};

// Builds the list once and reduces `count` fresh samples against it.
SieveRun run_sieve(Basis const& basis, SieveParams const& params,
                   std::size_t count, Rng& rng);
std::vector<LatticeVector> sieve_candidates(Basis const& basis,
                                            SieveParams const& params,
                                            std::size_t count, Rng& rng);

}  // namespace lpsieve
