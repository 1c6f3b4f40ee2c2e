#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hatk/dyadic.hpp"
#include "hatk/exponents.hpp"
#include "hatk/grid.hpp"
#include "hatk/norms.hpp"

namespace hatk {

// ---------------------------------------------------------------- paraproducts

/// Interval family, coefficients c_I and the packet flavor of each of the three slots.
struct ParaproductSpec {
  std::vector<DyadicInterval> family;
  std::vector<cplx> coefficients;
  std::array<PacketFlavor, 3> slots{PacketFlavor::non_lacunary, PacketFlavor::lacunary,
                                    PacketFlavor::lacunary};

  /// c_I = 1 on every member.
  static ParaproductSpec unit(std::vector<DyadicInterval> family);

  /// sup |c_I|; the spec is normalized when this is at most 1.
  double coefficient_bound() const;
  /// Throws ShapeError unless there is one coefficient per interval.
  void validate() const;
};

/// Every dyadic interval of the torus at scales where all three slot windows resolve.
std::vector<DyadicInterval> full_dyadic_family(const SampleGrid& grid,
                                               const std::array<PacketFlavor, 3>& slots);

/// sum_I c_I |I|^(-1/2) <f, phi1_I> <g, phi2_I> phi3_I.
GridFunction discretized_paraproduct(const ParaproductSpec& spec, const GridFunction& f,
                                     const GridFunction& g);

/**
 * sum_I c_I |I|^(-1/2) <f, phi1_I> <g, phi2_I> (h, phi3_I), where the third slot is
 * paired bilinearly: (h, phi) = sum h phi dx. This equals sum Pi(f,g) h dx.
 */
cplx trilinear_form(const ParaproductSpec& spec, const GridFunction& f, const GridFunction& g,
                    const GridFunction& h);

struct TelescopingTerms {
  /// 1D: [Q f P g, P f Q g, Q f Q g] summed over k.
  /// 2D: the nine x-term by y-term pieces, x-major in that same order.
  std::vector<GridFunction> terms;
  /// Coarsest block P f P g (1D) or the seven pieces that involve it (2D).
  GridFunction remainder;
  int k0 = 0;  ///< coarsest scale
  int k1 = 0;  ///< first scale whose P acts as the identity on f and g
};

/// Exact telescoping of f g into classical paraproduct pieces; Q_k = P_{k+1} - P_k.
TelescopingTerms telescoping_decomposition(const GridFunction& f, const GridFunction& g);

/// sum_k Q_k (P_k f . Q_k g) along one axis over every budgeted scale.
GridFunction classical_paraproduct(const GridFunction& f, const GridFunction& g, int axis = 1);

struct LocalizationSpec {
  DyadicInterval I0;
  MeasurableSet F;
  MeasurableSet G;
  MeasurableSet E_tilde;
};

/// Pi over the members inside I0, applied to (f 1_F, g 1_G) and cut off by 1_Etilde.
GridFunction localized_paraproduct(const ParaproductSpec& spec, const LocalizationSpec& loc,
                                   const GridFunction& f, const GridFunction& g);

/**
 * sum_I |I|^(-1/2) <f, psi_{I_n}> <g, psi_{I_n}> phi_I with L2-normalized packets
 * (lacunary, lacunary, non-lacunary) over the full budgeted family.
 */
GridFunction shifted_paraproduct(long n, const GridFunction& f, const GridFunction& g);

struct AlphaOptions {
  bool scale_weights = false;            ///< include the 2^(k alpha) factor of D^alpha
  std::optional<double> tolerance;       ///< throw if the multiplier tail exceeds it
};

struct AlphaParaproduct {
  GridFunction output;          ///< truncated Fourier-mode sum
  GridFunction exact;           ///< same operator with the untruncated multiplier
  std::vector<double> coefficients;  ///< c_n for n = -n_max .. n_max
  int n_max = 0;
  double decay_bound = 0.0;     ///< sup |c_n| (1 + |n|)^(1 + alpha)
  double tail_bound = 0.0;      ///< sup-norm bound of the dropped modes
  double output_error_bound = 0.0;  ///< L2 bound on output - exact
  int k_lo = 0, k_hi = 0;
};

/// Half-period of the mode expansion in units of 2^k; the product spectrum reaches 4 * 2^k.
inline constexpr double kAlphaPeriod = 8.0;

/**
 * Fourier coefficients of |xi / 2^k|^alpha phi_hat(xi / (8 2^k)) on the period 16 * 2^k,
 * computed in the physical variable at scale k; entry i holds c_(i - n_max).
 */
std::vector<double> alpha_coefficients(double alpha, int n_max, int k = 0);

/// Smallest n_max whose (1+|n|)^-(1+alpha) tail stays below relative_tail of the head mass.
int alpha_default_nmax(double alpha, double relative_tail = 1e-3);

/// sum_k M_k (Q_k f . Q_k g), M_k the windowed |xi|^alpha multiplier, expanded in modes.
AlphaParaproduct alpha_paraproduct(double alpha, const GridFunction& f, const GridFunction& g,
                                   int n_max, const AlphaOptions& options = {});

// ---------------------------------------------------------------- BHT

struct BhtKernelResult {
  GridFunction output;
  double quadrature_error = 0.0;  ///< sup |trapezoid(dx) - trapezoid(2 dx)|
};

inline constexpr int kBhtPadFactor = 4;

/**
 * p.v. integral f(x - t) g(x + t) dt / t by the odd-pairing trapezoid rule on the
 * line. Supports must lie in the central 1/kBhtPadFactor of the grid.
 */
BhtKernelResult bht_kernel(const GridFunction& f, const GridFunction& g);

/// Spectral oracle: i pi sum_xi f^(xi) g^(zeta - xi) sgn(eta - xi), sgn(0) = 0.
GridFunction bht_spectral(const GridFunction& f, const GridFunction& g);

struct BHTModelSpec {
  std::vector<Tritile> tiles;
  double margin = 0.9;
};

/// sum_P |I_P|^(-1/2) <f, phi1_P> <g, phi2_P> phi3_P.
GridFunction bht_model(const BHTModelSpec& spec, const GridFunction& f, const GridFunction& g);

// ---------------------------------------------------------------- bi-parameter and vector-valued

/// sum_k Q_k^y Pi_x(P_k^y f, Q_k^y g) with the classical paraproduct in x.
GridFunction tensor_paraproduct(const GridFunction& f, const GridFunction& g);

using BilinearOperator = std::function<GridFunction(const GridFunction&, const GridFunction&)>;

struct VectorValuedResult {
  GridFunction output;
  double norm_f = 0.0;
  double norm_g = 0.0;
  double norm_out = 0.0;
};

/// Applies op per vector index and evaluates the three mixed norms (spatial axes included).
VectorValuedResult vector_valued_apply(const BilinearOperator& op, const GridFunction& fs,
                                       const GridFunction& gs, const MixedNormSpec& spec_f,
                                       const MixedNormSpec& spec_g, const MixedNormSpec& spec_out);

// ---------------------------------------------------------------- Leibniz rule

struct MixedPair {
  Exponent x;
  Exponent y;
};

/// Exponents of the four right-hand terms: f-side and g-side pairs, plus (s1, s2).
struct LeibnizExponents {
  Exponent s1, s2;
  std::array<MixedPair, 4> f_side;
  std::array<MixedPair, 4> g_side;

  /// Same (p, q) pair in every term; s derived by Hölder.
  static LeibnizExponents uniform(MixedPair p, MixedPair q);
};

struct LeibnizSides {
  double lhs = 0.0;
  std::array<double, 4> rhs_terms{};
  double ratio = 0.0;  ///< lhs / sum of rhs terms
};

/// Throws DomainError naming the violated condition.
void check_leibniz_exponents(double alpha, double beta, const LeibnizExponents& e);

/// Both sides of the bi-parameter Leibniz inequality on a 2D torus grid.
LeibnizSides leibniz_sides(double alpha, double beta, const LeibnizExponents& exps, const GridFunction& f,
                           const GridFunction& g);

// ---------------------------------------------------------------- range calculator

struct RangeLevel {
  Exponent r1, r2, r;
};

struct RangeQuery {
  std::vector<RangeLevel> levels;  ///< innermost level last; one entry for single depth
  Exponent p, q, s;

  /// Parses "p=4 q=2 s=4/3 r1=4/3 r2=4 r=1"; tuples as "r1=2,4". s and r may be omitted.
  static RangeQuery parse(const std::string& text);
  std::string to_string() const;
};

struct RangeVerdict {
  bool member = false;
  std::optional<std::array<Rational, 3>> theta;  ///< witness from the feasibility route
  std::string case_label;                         ///< "i" .. "vii"
  bool printed_member = false;   ///< literal reading of the printed case table
  bool printed_disagrees = false;
};

struct RangeResult {
  bool member = false;
  std::vector<RangeVerdict> levels;
  bool chain_ok = true;  ///< level j lies in the range of level j+1
  std::string summary() const;
};

/// Exact theta-feasibility of the six strict inequalities (route b).
std::optional<std::array<Rational, 3>> theta_witness(const std::array<Rational, 3>& a,
                                                     const std::array<Rational, 3>& x);

/// Completed case table (route a); sets the label and the printed-table verdict.
bool range_case_table(const std::array<Rational, 3>& a, const std::array<Rational, 3>& x,
                      std::string& label, bool& printed_member);

/// Evaluates both routes per level and intersects; throws ConsistencyError if they disagree.
RangeResult bht_range_membership(const RangeQuery& query);

}  // namespace hatk
