#pragma once

#include <optional>
#include <vector>

#include "olab/grid.hpp"
#include "olab/maximal.hpp"
#include "olab/young.hpp"

namespace olab {

/// Unique band index: the k with a^k < v <= a^{k+1}.
int band_index(double a, double v);

/// Per-k slice of the level-a^k Calderon-Zygmund decomposition of g.
struct CZLevel {
  int k = 0;
  bool defined = true;  // false: ||g|| over the root exceeds a^k, level skipped

  std::vector<DyadicCube> cubes;  // maximal cubes Q_j^k with ||g||_{Phi,Q} > a^k
  std::vector<double> norm;       // ||g||_{Phi,Q_j^k}
  std::vector<char> sandwich_ok;  // a^k < norm <= 2^n a^k

  // populated by classify()
  std::vector<int> ell;        // -1 or the unique l >= 0 with the v^r average band
  std::vector<char> in_gamma;  // |Q cap {a^k < v <= a^{k+1}}| > 0
  std::vector<std::uint8_t> ek_mask;  // E_k cells

  // populated by secondary_decompose(); parallel to cubes, nonempty only for
  // ell == -1
  std::vector<std::vector<DyadicCube>> secondary;
  std::vector<std::vector<double>> secondary_avg;  // avg of v^r
  std::vector<std::vector<char>> secondary_sandwich_ok;
  std::vector<std::vector<char>> secondary_in_gamma;  // Gamma_{-1,k} flags
  std::vector<char> secondary_empty;  // Lambda_{-1} cube produced no crossing subcube
};

struct CZDecomposition {
  DyadicGrid grid{1, 0};
  double a = 0.0;
  double r = 1.0;  // exponent used by classify/secondary
  int k_min = 0, k_max = 0;
  std::vector<CZLevel> levels;  // k ascending
  GridFunction mg;              // M_{Phi,D} g (for the E_k sets)
  std::optional<CubeSums> vr_sums;
  bool classified = false;
  bool secondary_done = false;

  const CZLevel& level_for(int k) const { return levels.at(k - k_min); }
  CZLevel& level_for(int k) { return levels.at(k - k_min); }
};

/// k-range covering both the nontrivial level sets of M_{Phi,D} g and the
/// v-bands that can carry E_k mass.
std::pair<int, int> default_k_range(const GridFunction& g,
                                    const YoungFunction& phi,
                                    const GridFunction& v, double a);

/// Inclusion-maximal dyadic cubes with ||g||_{Phi,Q} > a^k for each k in the
/// range, found root-down; requires a > 2^n. Levels whose root cube already
/// exceeds a^k are flagged undefined and skipped.
CZDecomposition decompose(const GridFunction& g, const YoungFunction& phi,
                          double a, int k_min, int k_max);

/// Assigns every cube its unique Lambda class, flags Gamma membership by
/// exact cell counting, and builds the E_k masks from M_{Phi,D} g and v.
void classify(CZDecomposition& d, const GridFunction& v, double r);

/// Secondary decomposition of v^r restricted to each Lambda_{-1,k} cube at
/// level a^{kr}.
void secondary_decompose(CZDecomposition& d, const GridFunction& v, double r);

struct TaggedCube {
  DyadicCube cube;
  int k = 0;
};

enum class PrincipalMode { ell, minus_one };

struct PrincipalParams {
  PrincipalMode mode = PrincipalMode::ell;
  double a = 0.0;
  double r = 1.0;
  double beta = 0.0;  // minus_one threshold exponent: a^{(k-t) beta r}
};

struct PrincipalCubes {
  std::vector<TaggedCube> all;                        // unique principal cubes
  std::vector<int> generation_of;                     // parallel to all
  std::vector<std::vector<std::size_t>> generations;  // P_0, P_1, ... as indices
  std::vector<std::size_t> assignment;  // family index -> smallest principal
};

/// Recursive stopping-cube construction. Generation 0 holds the
/// inclusion-maximal family cubes; a cube joins the next generation when its
/// u-average beats the threshold relative to its principal ancestor and it is
/// inclusion-maximal with that property.
PrincipalCubes build_principal(const std::vector<TaggedCube>& family,
                               const GridFunction& u,
                               const PrincipalParams& params);

struct PrincipalSum {
  GridFunction h;  // sum over principal cubes of avg_Q(u) X_Q
  double c = 0.0;  // empirical min C with h <= C u
  std::size_t witness_cell = 0;
};

PrincipalSum principal_sum(const PrincipalCubes& p, const GridFunction& u);

}  // namespace olab
