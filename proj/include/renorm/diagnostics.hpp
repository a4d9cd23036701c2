#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "renorm/grid.hpp"
#include "renorm/models.hpp"
#include "renorm/solver.hpp"
#include "renorm/truncation.hpp"

namespace renorm {

enum class Verdict { pass, fail, informational };

const char* verdict_name(Verdict v);

/// Sweep coordinates of a report entry; absent ones print as empty CSV cells.
struct EntryParams {
  std::optional<double> k, n, eps, s, sigma, mu;
};

struct ReportEntry {
  std::string name;
  EntryParams params;
  double value = 0.0;
  std::optional<double> bound;
  Verdict verdict = Verdict::informational;
};

/// value <= bound + tol.
Verdict at_most(double value, double bound, double tol = 0.0);
/// value >= bound - tol.
Verdict at_least(double value, double bound, double tol = 0.0);

struct DiagnosticsReport {
  std::vector<ReportEntry> entries;
  /// Provenance; kept out of the CSV so that repeated runs produce identical files.
  std::string config_digest;
  std::string started_at;
  std::string finished_at;

  void add(ReportEntry entry) { entries.push_back(std::move(entry)); }
  void add(std::string name, EntryParams params, double value, std::optional<double> bound,
           Verdict verdict);
  /// True when no entry has a fail verdict.
  bool all_pass() const;
  std::size_t count(Verdict v) const;
};

inline constexpr const char* kCsvHeader = "name,k,n,eps,s,sigma,mu,value,bound,verdict";

/// One row per entry in the fixed column order of kCsvHeader, floats with 17 significant digits.
void write_csv(std::ostream& out, const DiagnosticsReport& report);

// ---------------------------------------------------------------------------------------
// Energy estimate

struct TruncationEnergy {
  double lhs = 0.0;
  /// 1/2 max_n of the lumped integral of u T_k(u), levels 0..K.
  double sup_term = 0.0;
  /// sum_n dt * integral of |grad T_k(u)|^p over levels 1..K.
  double gradient_term = 0.0;
  /// ||f_eps||_{L1(Q)} + ||u0_eps||_{L1}; zero when no data is attached.
  double data_mass = 0.0;
};

/// Energy functional of a trajectory. Throws DomainError for k <= 0 or p <= 1.
TruncationEnergy truncation_energy(const Field& u, double k, double p);
TruncationEnergy truncation_energy(const Solution& sol, double k);

/// Lumped L1 norms of the regularized data: ||f_eps||_{L1(Q)} (levels 1..K) and ||u0_eps||_{L1}.
double data_mass(const Solution& sol);

// ---------------------------------------------------------------------------------------
// Lorentz a-priori bounds

struct LorentzApriori {
  double u_index = 0.0;     ///< Lorentz exponent used for |u|^{p-1} (second index infinite)
  double grad_index = 0.0;  ///< Lorentz exponent used for |grad u|^{p-1}
  double u_norm = 0.0;
  double grad_norm = 0.0;
  double u_scale = 0.0;     ///< M^{e1} |Q|^{...}, the right-hand scale of the |u|^{p-1} bound
  double grad_scale = 0.0;  ///< M^{e2}, the right-hand scale of the gradient bound
  double u_ratio = 0.0;
  double grad_ratio = 0.0;
};

/// Weak-type norms over Q (levels 1..K, cell measure |K| dt) of |u|^{p-1} from cell means
/// and of |grad u|^{p-1} from cell gradients, with their ratios to the M_est scales.
/// Throws DomainError for p <= 1 or M_est <= 0.
LorentzApriori lorentz_apriori(const Field& u, double p, double M_est);

// ---------------------------------------------------------------------------------------
// Tail energies

struct TailEnergies {
  double flux_tail = 0.0;
  double grad_tail = 0.0;
  double conv_tail = 0.0;
};

/// (1/n) times the space-time integrals over cells with |mean u| < n of a(grad u).grad u,
/// |grad u|^p and |Phi(u)| |grad u|. Throws DomainError for n <= 0.
TailEnergies tail_energies(const Field& u, double n, const ProblemModels& models);

// ---------------------------------------------------------------------------------------
// Renormalized identity

/// Test function phi(x, t); its gradient is taken from the nodal interpolant, as in the solver.
using TestFunction = SpaceTimeScalar;

/// (T - t) * prod over axes of xi (1 - xi), with xi the coordinate rescaled to [0, 1].
TestFunction default_test_function(const Grid& grid);

struct RenormalizedTerms {
  double initial = 0.0;      ///< -integral phi(0) S(u0)
  double time = 0.0;         ///< -double integral S(u) dphi/dt
  double flux = 0.0;         ///< S'(u) a(grad u) . grad phi
  double flux_curv = 0.0;    ///< S''(u) phi a(grad u) . grad u
  double conv = 0.0;         ///< S'(u) Phi(T_M u) . grad phi
  double conv_curv = 0.0;    ///< S''(u) phi Phi(T_M u) . grad T_M(u)
  double source = 0.0;       ///< f S'(u) phi
  double terminal = 0.0;     ///< integral phi(T) S(u(T)); zero for admissible phi
  double residual = 0.0;     ///< |initial + time + flux + flux_curv + conv + conv_curv + terminal - source|
};

/// Discrete renormalized identity with the solver's quadrature: lumped nodal time and
/// source terms, centroid flux evaluation, the time derivative of phi integrated exactly
/// over each step against the piecewise-constant S(u^n). M_reduce is the truncation level
/// of the convective terms. Throws DomainError if phi(., T) is not zero at the nodes.
RenormalizedTerms renormalized_residual(const Field& u, const Field& f_eps, const ProblemModels& models,
                                        const RenormFunction& S, double M_reduce, const TestFunction& phi);
RenormalizedTerms renormalized_residual(const Solution& sol, const RenormFunction& S, double M_reduce,
                                        const TestFunction& phi);

/// Same assembly without the terminal-time precondition (the terminal term is included).
RenormalizedTerms renormalized_identity_terms(const Field& u, const Field& f_eps,
                                              const ProblemModels& models, const RenormFunction& S,
                                              double M_reduce, const TestFunction& phi);

// ---------------------------------------------------------------------------------------
// Strong convergence of truncated gradients

struct CauchyRow {
  std::size_t i = 0;  ///< pair (i, i + 1) of the input list
  double cauchy_norm = 0.0;
  double pairing = 0.0;
};

/// For consecutive fields: ||grad T_k u_i - grad T_k u_{i+1}||_{L^p(Q)} and the monotone pairing
/// of a over levels 1..K. Throws DomainError for mismatched grids or k <= 0.
std::vector<CauchyRow> gradient_convergence(std::span<const Field* const> us, double k,
                                            const FluxModel& flux);

// ---------------------------------------------------------------------------------------
// Uniqueness experiment

struct UniquenessTerms {
  double gap = 0.0;  ///< max_n lumped integral of |u - v|
  double I0 = 0.0, I1 = 0.0, I2 = 0.0, I3 = 0.0, I4 = 0.0, I5 = 0.0;
  double balance = 0.0;  ///< I0 + I1 + I2 + I3 + I4 - I5
};

/// Gap and proof-term table with the plateau cutoff T = T_s^sigma and w = T_k(T(u) - T(v)),
/// all scaled by 1/k_small and integrated up to the final time. f_u and f_v default to zero.
/// Throws DomainError for mismatched grids or non-positive s, sigma, k_small.
UniquenessTerms uniqueness_gap(const Field& u, const Field& v, double s, double sigma, double k_small,
                               const ProblemModels& models, const Field* f_u = nullptr,
                               const Field* f_v = nullptr);

/// max_n of the lumped L1 distance between `coarse` and `fine` restricted to the coarse
/// nodes and levels. `fine` must be a refinement of `coarse` by an integer factor.
double refinement_l1_gap(const Field& coarse, const Field& fine);

// ---------------------------------------------------------------------------------------
// Exponential time regularization

struct TimeRegularizationRow {
  double mu = 0.0;
  double grad_error = 0.0;  ///< ||grad eta - grad T_k(u)||_{L^p(Q)}
  double l2_error = 0.0;    ///< ||eta - T_k(u)||_{L^2(Q)}, lumped
  double max_abs = 0.0;     ///< max |eta|, never above k
};

std::vector<TimeRegularizationRow> time_regularization(const Field& u, double k, double p,
                                                       std::span<const double> mu_list,
                                                       std::span<const double> psi);

/// log2(e_i / e_{i+1}) for consecutive entries; NaN where an entry is not positive.
std::vector<double> observed_orders(std::span<const double> errors, double ratio = 2.0);

}  // namespace renorm
