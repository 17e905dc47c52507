#pragma once

// Frequency-side machinery: the unitary-dual quadrature grid, truncated
// Schrodinger representation matrices in the |lambda|-scaled Hermite basis,
// Rockland operator matrices, and the exact spectral functional calculus.

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "gpdo/grid.hpp"
#include "gpdo/structure.hpp"

namespace gpdo {

using Mat = Eigen::MatrixXcd;

/// Plancherel density constant for the 3d Heisenberg group: measure
/// c_P |lambda| d(lambda) on the dual, c_P = (2 pi)^-2.
inline constexpr double kPlancherelC = 1.0 / (4.0 * M_PI * M_PI);

enum class RocklandKind { sublaplacian, graded_powers };

/// Homogeneous degree of the Rockland operator: 2 for the sublaplacian,
/// 2*nu0 for the graded-powers example.
int rockland_degree(RocklandKind k, const GradedStructure& s);

/// Quadrature grid on the unitary dual.
///  - heisenberg backend: signed lambda in +-[lambda_min, lambda_max], composite
///    Gauss-Legendre with geometrically graded panel edges (panels split evenly
///    across the two signs), weights including the Plancherel density
///    c_P |lambda|; Hermite truncation N with tail buffer B = ceil(0.2 (N+1)).
///  - abelian backend: uniform xi lattice dual to a GroupGrid (spacing
///    2 pi / (P h)), weights (2 pi)^-n (Delta xi)^n; matrices are 1x1.
struct FrequencyGrid {
    enum class Backend { heisenberg, abelian };
    Backend backend = Backend::heisenberg;

    // heisenberg parameters
    double lambda_min = 0, lambda_max = 0;
    int panels = 0, nodes_per_panel = 0;
    int N = 0, B = 0;

    // abelian parameters
    int n = 0;
    int P = 0;
    double dxi = 0;
    std::vector<double> xi_axis;

    std::vector<double> lam;   // heisenberg: signed lambda per node
    std::vector<double> w;     // per-node weight incl. Plancherel density

    static FrequencyGrid heisenberg(double lambda_min, double lambda_max, int panels,
                                    int nodes_per_panel, int N);
    static FrequencyGrid abelian_for(const GroupGrid& g);

    std::size_t nodes() const;
    int mat_dim() const { return backend == Backend::heisenberg ? N + 1 : 1; }
    int retained_dim() const { return backend == Backend::heisenberg ? N + 1 - B : 1; }
    /// xi vector of an abelian node (lattice unflatten, last axis fastest).
    Vec xi_point(std::size_t node) const;
    /// Index of the node at -lambda (heisenberg) / -xi (abelian, exact only
    /// for lattices symmetric about 0).
    std::size_t mirror_node(std::size_t node) const;
};

/// Gauss-Legendre nodes/weights on [-1, 1] (Golub-Welsch).
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

/// Shared per-truncation-size Hermite ladder data at unit scale |lambda| = 1:
/// U1 = matrix of multiplication by u, D1 = matrix of d/du, and the spectral
/// factorizations used to evaluate one-parameter unitary groups exactly.
struct HermiteOps {
    int N;                         // truncation: matrices are (N+1)x(N+1)
    Eigen::MatrixXd U1, D1;
    Eigen::VectorXd u_eig;         // U1 = Vu diag(u_eig) Vu^T
    Eigen::MatrixXd Vu;
    Eigen::VectorXd s_eig;         // -i D1 = Vd diag(s_eig) Vd^*
    Mat Vd;

    explicit HermiteOps(int N);
    static std::shared_ptr<const HermiteOps> get(int N);   // process-wide cache

    /// exp(x * D(lambda)) with D(lambda) = sqrt|lambda| D1  (shift generator).
    Mat exp_xD(double x, double lambda) const;
    /// exp(i lambda y U(lambda)) with U(lambda) = U1 / sqrt|lambda|.
    Mat exp_iyU(double y, double lambda) const;
};

/// Infinitesimal representation matrices at node lambda:
/// pi(X) = D(lambda), pi(Y) = i lambda U(lambda), pi(T) = i lambda Id.
Mat infinitesimal_rep(const FrequencyGrid& fg, int j, std::size_t node);

/// Group representation matrix pi_lambda(g): spectral exponential of the
/// truncated generator x D + i lambda y U + i lambda t. For the abelian
/// backend this is the 1x1 character e^{i xi . x}.
Mat group_rep_matrix(const GradedStructure& s, const FrequencyGrid& fg, const Vec& g,
                     std::size_t node);

/// pi_lambda(g) in factored form e^{i lambda (t + xy/2)} exp(i lambda y U) exp(x D);
/// same infinite-dimensional operator, cheaper and used by the transform pipelines.
Mat group_rep_factored(const GradedStructure& s, const FrequencyGrid& fg, const Vec& g,
                       std::size_t node);

/// Rockland operator matrix at a node. Sublaplacian: exact diagonal
/// |lambda|(2k+1). Graded powers (X^4 + Y^4 - T^2 on H1): Hermitian positive
/// definite matrix assembled from truncated ladder products.
Mat rockland_matrix(const GradedStructure& s, const FrequencyGrid& fg, RocklandKind kind,
                    std::size_t node);

/// (I + pi(R))^gamma by the exact spectral calculus (diagonal for the
/// sublaplacian; Hermitian eigendecomposition for graded powers).
Mat spectral_power(const GradedStructure& s, const FrequencyGrid& fg, RocklandKind kind,
                   double gamma, std::size_t node);

/// Diagonal of (1 + spec)^gamma for the sublaplacian backend (exact powers).
Eigen::VectorXd sublaplacian_power_diag(const FrequencyGrid& fg, double gamma,
                                        std::size_t node);

}   // namespace gpdo
