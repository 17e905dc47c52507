#pragma once

// Operator-valued symbols sigma(x, node) on (group grid) x (frequency grid),
// stored as sums of separable terms a_k(x) (x) M_k(node). Difference
// operators are evaluated in closed form from the commutation relations of
// the representation (DifferenceCalculus); a kernel-space route through
// synthesize -> multiply -> analyze (KernelPipeline) is kept as an
// independent cross-check. x-derivatives act through left-invariant finite
// differences on the coefficient, and the class seminorms sandwich the
// result between spectral powers of I + R for a fixed positive Rockland
// operator R.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gpdo/fourier.hpp"
#include "gpdo/freq.hpp"
#include "gpdo/grid.hpp"
#include "gpdo/structure.hpp"

namespace gpdo {

/// Spectral data of I + pi(R) per frequency node: eigenvalues mu >= 0 and,
/// when R is not already diagonal in the working basis, the eigenvectors.
/// Built once and shared by symbols, seminorm weights and Sobolev norms.
class SpectralCalculus {
  public:
    SpectralCalculus(const GradedStructure& s, const FrequencyGrid& fg, RocklandKind kind);
    static std::shared_ptr<const SpectralCalculus> make(const GradedStructure& s,
                                                        const FrequencyGrid& fg,
                                                        RocklandKind kind);

    const FrequencyGrid& freq() const { return *fg_; }
    const GradedStructure& structure() const { return *s_; }
    RocklandKind kind() const { return kind_; }
    int nu() const { return nu_; }
    bool diagonal() const { return diag_; }
    const Eigen::VectorXd& eigenvalues(std::size_t node) const { return mu_[node]; }

    /// (I + pi(R))^gamma at a node.
    Mat power(double gamma, std::size_t node) const;
    /// diag of (I + pi(R))^gamma (diagonal backends only).
    Eigen::VectorXd power_diag(double gamma, std::size_t node) const;
    /// phi(pi(R)) via the spectral theorem.
    Mat apply(const std::function<double(double)>& phi, std::size_t node) const;
    /// pi(R) itself.
    Mat rockland(std::size_t node) const;

  private:
    const GradedStructure* s_;
    const FrequencyGrid* fg_;
    RocklandKind kind_;
    int nu_;
    bool diag_;
    std::vector<Eigen::VectorXd> mu_;
    std::vector<Mat> V_;   // empty when diag_
};

/// Scalar coefficient a(x): constant one, a callable, or samples on a grid.
struct Coefficient {
    enum class Kind { one, callable, sampled };
    Kind kind = Kind::one;
    std::string name = "one";
    std::function<cd(const Vec&)> fn;
    const GroupGrid* grid = nullptr;   // sampled only
    std::vector<cd> v;

    bool is_const() const { return kind == Kind::one; }
    cd at(const GroupGrid& g, std::size_t flat) const;
    double max_abs(const GroupGrid& g) const;
    static Coefficient one();
    static Coefficient named(const std::string& name);   // registry via make_coefficient
    static Coefficient sampled_on(const GroupGrid& g, std::vector<cd> values,
                                  std::string name);
};

struct SymbolClassParams {
    double m = 0;
    double rho = 1;
    double delta = 0;
    void validate() const;   // 0 <= delta <= rho <= 1, delta != 1
};

struct SymbolTerm {
    Coefficient a;
    std::vector<Mat> M;                 // one block per frequency node
    bool diag = false;                  // every block diagonal
    std::optional<double> power_exp;    // M == (I+R)^p exactly (spectral tag)
};

struct Symbol {
    const GradedStructure* s = nullptr;
    const FrequencyGrid* fg = nullptr;
    std::shared_ptr<const SpectralCalculus> spec;   // R used by the class weights
    SymbolClassParams cls;
    double gamma1 = 0, gamma2 = 0;      // recorded regularity offsets (metadata)
    std::vector<SymbolTerm> terms;      // empty => zero symbol
    double kernel_boundary_ratio = 0;   // diagnostic from the last kernel pipeline

    bool broadcast() const;
    /// sigma(x, node) assembled densely (g needed only for x-dependent terms).
    Mat eval(const GroupGrid* g, std::size_t xflat, std::size_t node) const;
    Symbol scaled(cd c) const;
    Symbol plus(const Symbol& o) const;
    /// Per-node conjugate transpose (broadcast symbols only).
    Symbol adjoint() const;
    /// sum_node w_node tr |M(node)| (trace-class visibility diagnostic).
    double trace_diagnostic() const;
};

/// Named multipliers phi(mu): "one", "heat" (e^{-mu}), "power" (param =
/// exponent gamma, exact spectral tag), "bump" (e^{-(mu-2)^2/2}).
Symbol from_multiplier(std::shared_ptr<const SpectralCalculus> spec, const std::string& phi,
                       double param, SymbolClassParams cls);
Symbol symbol_identity(std::shared_ptr<const SpectralCalculus> spec, double m = 0);
/// Ordered product pi(X_1)^{a_1} ... pi(X_n)^{a_n}; order m = homogeneous
/// degree of alpha, rho = 1, delta = 0.
Symbol from_invariant_operator(std::shared_ptr<const SpectralCalculus> spec,
                               const MultiIndex& alpha);
/// a(x) * base, with a from the coefficient registry or a callable.
Symbol with_coefficient(Symbol base, Coefficient a);
/// x-independent symbol from an explicit transform field.
Symbol from_transform(std::shared_ptr<const SpectralCalculus> spec, const FourierField& F,
                      SymbolClassParams cls);

/// Kernel-side transform pair used by difference operators and kernel decay
/// analysis. Synthesis is the delicate half: a hard quadrature cutoff at
/// lambda_max makes kernels ring with algebraic tails, and the main
/// frequency grid is tuned for function transforms, not for resolving
/// oscillations e^{i lambda t} across the whole kernel box (that needs node
/// spacing << pi / box_size). So on the Heisenberg backend the pipeline
///  1. re-samples each matrix field onto a lambda-denser copy of the main
///     grid (same panel edges, dense_factor x nodes per panel) by panel-local
///     barycentric interpolation -- exact for polynomial fields like pi(T),
///     spectrally accurate for smooth ones,
///  2. multiplies by a Gaussian band window W(lambda) = exp(-(s lambda /
///     lambda_max)^2) so the synthesized kernel has Gaussian decay in t
///     inside the box (an entire window keeps the quadrature spectrally
///     convergent and satisfies sup |W + dW/dln lambda| = 1),
///  3. synthesizes on the kernel grid and transforms back with a plain
///     analysis step evaluated at the original main-grid nodes.
/// On the abelian backend the lattice transform pair is exactly mutually
/// inverse, so the pipeline is the plain engine (no window, no re-sampling).
struct KernelPipelineOptions {
    int dense_factor = 4;            // lambda nodes per panel multiplier on the synthesis grid
    double window_steepness = 3.5;   // s in W(lambda) = exp(-(s lambda / lambda_max)^2)
};

class KernelPipeline {
  public:
    KernelPipeline(const GradedStructure& s, const GroupGrid& kgrid,
                   const FrequencyGrid& fg, KernelPipelineOptions opt);
    KernelPipeline(const GradedStructure& s, const GroupGrid& kgrid,
                   const FrequencyGrid& fg, int dense_factor = 4)
        : KernelPipeline(s, kgrid, fg, KernelPipelineOptions{dense_factor, 3.5}) {}
    KernelPipeline(const KernelPipeline&) = delete;
    KernelPipeline& operator=(const KernelPipeline&) = delete;

    const GradedStructure& structure() const { return *s_; }
    const GroupGrid& grid() const { return back_.grid(); }
    const FrequencyGrid& freq() const { return *fg_; }
    /// Plain engine (kernel grid) x (main nodes): analysis half + unwindowed
    /// synthesis for band-limited reconstruction work.
    const FourierEngine& plain() const { return back_; }

    /// Windowed kernel synthesis of one per-main-node matrix field.
    SampledFunction synthesize_kernel(const std::vector<Mat>& M) const;
    /// Analysis from the kernel grid back onto the main frequency nodes.
    FourierField forward(const SampledFunction& f) const { return back_.forward(f); }
    /// Band window value at a main-grid node (the windowed-calculus
    /// factor W entering closed-form difference identities).
    double window_at(std::size_t node) const;

  private:
    const GradedStructure* s_;
    const FrequencyGrid* fg_;
    KernelPipelineOptions opt_;
    FrequencyGrid dense_;                        // heisenberg only
    std::unique_ptr<FourierEngine> dense_eng_;   // kgrid x dense_
    FourierEngine back_;                         // kgrid x fg
    std::vector<double> win_;                    // band window at dense nodes
    Eigen::VectorXd tap_;                        // Hermite-index taper (buffer band)
    std::vector<std::size_t> sup0_;              // first main node of the panel
    std::vector<std::vector<double>> cw_;        // barycentric weights per dense node
};

/// Gaussian band window W(lambda) = exp(-(steepness * lambda / lambda_max)^2).
/// Entire in lambda, equal to 1 at lambda = 0, 4.8e-6 at the band edge for
/// the default steepness, and sup over lambda of |W + dW/dln lambda| = 1.
double band_edge_window(double lambda, double lambda_max, double steepness = 3.5);

/// Difference operators Delta^alpha: the transform-side image of
/// multiplication of the kernel by the coordinate monomial x^alpha.
///
/// On the Heisenberg backend they are evaluated in closed form from the
/// commutation relations of the Schroedinger representation. With U the
/// position matrix and D the derivative matrix of the scaled Hermite basis
/// (so pi(X) = D, pi(Y) = i lambda U, [D, U] = I),
///   x  pi(g)^* = [U, pi(g)^*]
///   y  pi(g)^* = (i/lambda) [D, pi(g)^*]
///   t  pi(g)^* = i d/dlambda pi(g)^*
///                - (i/(2 lambda)) ([D, pi(g)^*] U - [U, pi(g)^*] D),
/// and each identity passes through the analysis quadrature term by term,
/// so on sigma = f-hat the first two hold to rounding error. The lambda
/// derivative is taken panel-locally with spectral (barycentric) weights.
/// Because the ladder commutator [D, U] = I fails in the truncated basis
/// only at the last index, each application contaminates at most two
/// trailing rows/columns: results are exact on the retained block as long
/// as 2|alpha| stays below the tail buffer.
///
/// On the abelian backend the operator is forward(x^alpha * synthesize(M))
/// through the exactly invertible lattice transform pair.
class DifferenceCalculus {
  public:
    /// `lattice` (a main-grid engine) is required on the abelian backend
    /// and ignored on the Heisenberg one.
    DifferenceCalculus(const GradedStructure& s, const FrequencyGrid& fg,
                       const FourierEngine* lattice = nullptr);

    const GradedStructure& structure() const { return *s_; }
    const FrequencyGrid& freq() const { return *fg_; }

    /// One coordinate direction (j = 0..n-1) applied to a matrix field.
    std::vector<Mat> apply_direction(const std::vector<Mat>& M, int j) const;

  private:
    const GradedStructure* s_;
    const FrequencyGrid* fg_;
    const FourierEngine* eng_;               // abelian lattice pair
    Mat U1_, D1_;                            // unit-scale ladder matrices
    std::vector<Eigen::MatrixXd> dmat_;      // derivative matrix per panel-side
    std::vector<std::size_t> panel_base_;    // first node of the panel of a node
    std::vector<int> panel_id_;              // which dmat_ a node belongs to

    friend Symbol difference_op(const Symbol&, const MultiIndex&, const DifferenceCalculus&);
};

/// Delta^alpha sigma via the closed-form calculus (Heisenberg) or the exact
/// lattice pair (abelian). alpha = 0 returns sigma unchanged.
Symbol difference_op(const Symbol& sym, const MultiIndex& alpha, const DifferenceCalculus& dc);

/// Kernel-space route: per term, M -> forward(x^alpha * synthesize(M))
/// through the windowed kernel pipeline. Used as an independent cross-check
/// of the closed-form calculus; its accuracy is limited by the basis
/// truncation (the synthesized point mass is read against Hermite diagonals
/// whose curvature grows with the row index). alpha = 0 returns sigma
/// unchanged. On the Heisenberg backend the result approximates
/// Delta^alpha (W sigma) for the pipeline's band window W.
Symbol difference_op_kernel(const Symbol& sym, const MultiIndex& alpha,
                            const KernelPipeline& kp);

/// Left-invariant x-derivatives X^beta applied to the coefficients by
/// fourth-order finite differences on grid g. Broadcast terms vanish.
Symbol x_derivative(const Symbol& sym, const MultiIndex& beta, const GroupGrid& g);

/// Class seminorm: sup over (x-node, frequency node) of the largest singular
/// value, on the retained block, of
///   (I+R)^{(rho [alpha] - m - delta [beta] + gamma)/nu} X^beta Delta^alpha sigma (I+R)^{-gamma/nu}.
/// dc is required when alpha != 0; xgrid when beta != 0 or sigma is
/// x-dependent.
double seminorm(const Symbol& sym, const MultiIndex& alpha, const MultiIndex& beta,
                double gamma, const DifferenceCalculus* dc, const GroupGrid* xgrid);

struct SeminormTriple {
    MultiIndex alpha, beta;
    double gamma = 0;
};

struct ClassReportRow {
    SeminormTriple triple;
    double base = 0, refined = 0, ratio = 1;
};

/// Seminorm table at a baseline and a refined configuration; ratio =
/// refined/base with near-zero rows reported as ratio 1. The factory builds
/// the same symbol family on each calculus' frequency grid; xgrid supplies
/// the x-sweep for x-dependent symbols or beta != 0 rows.
std::vector<ClassReportRow> class_report(
    const std::function<Symbol(const FrequencyGrid&)>& factory,
    const std::vector<SeminormTriple>& triples, const DifferenceCalculus& base,
    const DifferenceCalculus& refined, const GroupGrid* xgrid = nullptr);

/// Derivative-growth admissibility of a scalar multiplier: returns
/// C_a = max over a mu-lattice of |d^a phi / d mu^a| (1+mu)^{a - m/nu}
/// for a = 0..a_max (finite differences); admissible when all are finite.
std::vector<double> multiplier_admissibility(const std::function<double(double)>& phi,
                                             double m, int nu, int a_max, double mu_max);

/// Homogeneous degree [alpha] = sum alpha_j upsilon_j.
double hom_multi_degree(const GradedStructure& s, const MultiIndex& alpha);

}   // namespace gpdo
