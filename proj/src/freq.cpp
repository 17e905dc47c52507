#include "gpdo/freq.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace gpdo {

int rockland_degree(RocklandKind k, const GradedStructure& s) {
    if (s.dim() == 1 || s.step() == 1) return 2;   // abelian Laplacian
    return k == RocklandKind::sublaplacian ? 2 : 2 * s.nu0();
}

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    // Golub-Welsch: eigenvalues of the Jacobi matrix give the nodes, weights
    // from the first eigenvector components.
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    x.resize(n);
    w.resize(n);
    for (int k = 0; k < n; ++k) {
        x[k] = es.eigenvalues()(k);
        const double v0 = es.eigenvectors()(0, k);
        w[k] = 2.0 * v0 * v0;
    }
}

FrequencyGrid FrequencyGrid::heisenberg(double lambda_min, double lambda_max, int panels,
                                        int nodes_per_panel, int N) {
    if (!(lambda_min > 0) || !(lambda_max > lambda_min))
        throw std::invalid_argument("frequency grid: need 0 < lambda_min < lambda_max");
    if (panels < 2 || panels % 2 != 0)
        throw std::invalid_argument("frequency grid: panels must be even and >= 2");
    if (nodes_per_panel < 1 || N < 1)
        throw std::invalid_argument("frequency grid: nodes_per_panel and N must be >= 1");

    FrequencyGrid fg;
    fg.backend = Backend::heisenberg;
    fg.lambda_min = lambda_min;
    fg.lambda_max = lambda_max;
    fg.panels = panels;
    fg.nodes_per_panel = nodes_per_panel;
    fg.N = N;
    fg.B = static_cast<int>(std::ceil(0.2 * (N + 1)));

    const int half = panels / 2;
    const double ratio = std::pow(lambda_max / lambda_min, 1.0 / half);
    std::vector<double> edges(half + 1);
    for (int i = 0; i <= half; ++i) edges[i] = lambda_min * std::pow(ratio, i);
    edges[half] = lambda_max;   // avoid pow round-off at the outer edge

    std::vector<double> gx, gw;
    gauss_legendre(nodes_per_panel, gx, gw);

    // Positive side first (ascending), then the mirrored negative side in the
    // same panel order so mirror_node is a fixed offset.
    std::vector<double> pos_lam, pos_w;
    for (int p = 0; p < half; ++p) {
        const double a = edges[p], b = edges[p + 1];
        const double mid = 0.5 * (a + b), hw = 0.5 * (b - a);
        for (int q = 0; q < nodes_per_panel; ++q) {
            const double l = mid + hw * gx[q];
            pos_lam.push_back(l);
            pos_w.push_back(hw * gw[q] * kPlancherelC * std::abs(l));
        }
    }
    fg.lam = pos_lam;
    fg.w = pos_w;
    for (std::size_t i = 0; i < pos_lam.size(); ++i) {
        fg.lam.push_back(-pos_lam[i]);
        fg.w.push_back(pos_w[i]);
    }
    return fg;
}

FrequencyGrid FrequencyGrid::abelian_for(const GroupGrid& g) {
    FrequencyGrid fg;
    fg.backend = Backend::abelian;
    fg.n = g.n;
    fg.P = g.P;
    fg.N = 0;
    fg.B = 0;
    fg.dxi = 2.0 * M_PI / (g.P * g.h());
    fg.xi_axis.resize(g.P);
    // Centered lattice: offsets -(P-1)/2 .. (P-1)/2 of dxi (symmetric for odd P).
    for (int k = 0; k < g.P; ++k) fg.xi_axis[k] = (k - 0.5 * (g.P - 1)) * fg.dxi;
    const std::size_t total = static_cast<std::size_t>(std::pow(double(g.P), g.n) + 0.5);
    const double wt = std::pow(fg.dxi / (2.0 * M_PI), g.n);
    fg.lam.assign(total, 0.0);
    fg.w.assign(total, wt);
    return fg;
}

std::size_t FrequencyGrid::nodes() const { return w.size(); }

Vec FrequencyGrid::xi_point(std::size_t node) const {
    if (backend != Backend::abelian)
        throw std::logic_error("xi_point: abelian backend only");
    Vec xi(n);
    std::size_t r = node;
    for (int a = n - 1; a >= 0; --a) {
        xi[a] = xi_axis[r % P];
        r /= P;
    }
    return xi;
}

std::size_t FrequencyGrid::mirror_node(std::size_t node) const {
    if (backend == Backend::heisenberg) {
        const std::size_t half = nodes() / 2;
        return node < half ? node + half : node - half;
    }
    std::size_t out = 0;
    std::size_t r = node;
    std::vector<int> idx(n);
    for (int a = n - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(r % P);
        r /= P;
    }
    for (int a = 0; a < n; ++a) out = out * P + static_cast<std::size_t>(P - 1 - idx[a]);
    return out;
}

HermiteOps::HermiteOps(int N_) : N(N_) {
    U1 = Eigen::MatrixXd::Zero(N + 1, N + 1);
    D1 = Eigen::MatrixXd::Zero(N + 1, N + 1);
    for (int k = 0; k + 1 <= N; ++k) {
        const double u = std::sqrt((k + 1) / 2.0);   // unit scale |lambda| = 1
        U1(k, k + 1) = U1(k + 1, k) = u;
        D1(k, k + 1) = u;
        D1(k + 1, k) = -u;
    }
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(U1);
        u_eig = es.eigenvalues();
        Vu = es.eigenvectors();
    }
    {
        Mat H = Mat::Zero(N + 1, N + 1);   // H = -i D1 is Hermitian
        for (int r = 0; r <= N; ++r)
            for (int c = 0; c <= N; ++c) H(r, c) = cd(0.0, -D1(r, c));
        Eigen::SelfAdjointEigenSolver<Mat> es(H);
        s_eig = es.eigenvalues();
        Vd = es.eigenvectors();
    }
}

std::shared_ptr<const HermiteOps> HermiteOps::get(int N) {
    static std::mutex mu;
    static std::map<int, std::shared_ptr<const HermiteOps>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    auto ops = std::make_shared<const HermiteOps>(N);
    cache.emplace(N, ops);
    return ops;
}

Mat HermiteOps::exp_xD(double x, double lambda) const {
    // x D(lambda) = i * (x sqrt|lambda|) * (-i D1); phases e^{i x sqrt|l| s}.
    const double a = x * std::sqrt(std::abs(lambda));
    Eigen::VectorXcd ph(N + 1);
    for (int k = 0; k <= N; ++k) ph(k) = std::exp(cd(0.0, a * s_eig(k)));
    return Vd * ph.asDiagonal() * Vd.adjoint();
}

Mat HermiteOps::exp_iyU(double y, double lambda) const {
    // i lambda y U(lambda) = i (sgn(lambda) sqrt|lambda| y) U1.
    const double a = (lambda >= 0 ? 1.0 : -1.0) * std::sqrt(std::abs(lambda)) * y;
    Eigen::VectorXcd ph(N + 1);
    for (int k = 0; k <= N; ++k) ph(k) = std::exp(cd(0.0, a * u_eig(k)));
    return (Vu * ph.asDiagonal() * Vu.transpose()).eval();
}

Mat infinitesimal_rep(const FrequencyGrid& fg, int j, std::size_t node) {
    if (fg.backend == FrequencyGrid::Backend::abelian) {
        Mat m(1, 1);
        m(0, 0) = cd(0.0, fg.xi_point(node)[static_cast<std::size_t>(j)]);
        return m;
    }
    const double l = fg.lam[node];
    const double sl = std::sqrt(std::abs(l));
    auto ops = HermiteOps::get(fg.N);
    const int d = fg.N + 1;
    Mat m = Mat::Zero(d, d);
    switch (j) {
        case 0:   // pi(X) = sqrt|lambda| D1
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c) m(r, c) = sl * ops->D1(r, c);
            return m;
        case 1:   // pi(Y) = i sgn(lambda) sqrt|lambda| U1
            for (int r = 0; r < d; ++r)
                for (int c = 0; c < d; ++c)
                    m(r, c) = cd(0.0, (l >= 0 ? 1.0 : -1.0) * sl * ops->U1(r, c));
            return m;
        case 2:   // pi(T) = i lambda Id
            return cd(0.0, l) * Mat::Identity(d, d);
        default:
            throw std::out_of_range("infinitesimal_rep: basis index");
    }
}

Mat group_rep_matrix(const GradedStructure& s, const FrequencyGrid& fg, const Vec& g,
                     std::size_t node) {
    if (fg.backend == FrequencyGrid::Backend::abelian) {
        const Vec xi = fg.xi_point(node);
        double ph = 0;
        for (int a = 0; a < fg.n; ++a) ph += xi[static_cast<std::size_t>(a)] * g[static_cast<std::size_t>(a)];
        Mat m(1, 1);
        m(0, 0) = std::exp(cd(0.0, ph));
        return m;
    }
    (void)s;
    // Generator x pi(X) + y pi(Y) + t pi(T) = i H with H Hermitian; exact
    // unitary via the spectral theorem.
    const int d = fg.N + 1;
    Mat A = Mat::Zero(d, d);
    for (int j = 0; j < 3; ++j) A += g[static_cast<std::size_t>(j)] * infinitesimal_rep(fg, j, node);
    Mat H = A * cd(0.0, -1.0);   // A = iH
    Eigen::SelfAdjointEigenSolver<Mat> es(H);
    Eigen::VectorXcd ph(d);
    for (int k = 0; k < d; ++k) ph(k) = std::exp(cd(0.0, es.eigenvalues()(k)));
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Mat group_rep_factored(const GradedStructure& s, const FrequencyGrid& fg, const Vec& g,
                       std::size_t node) {
    if (fg.backend == FrequencyGrid::Backend::abelian)
        return group_rep_matrix(s, fg, g, node);
    const double l = fg.lam[node];
    const double x = g[0], y = g[1], t = g[2];
    auto ops = HermiteOps::get(fg.N);
    const cd phase = std::exp(cd(0.0, l * (t + 0.5 * x * y)));
    return phase * (ops->exp_iyU(y, l) * ops->exp_xD(x, l));
}

Mat rockland_matrix(const GradedStructure& s, const FrequencyGrid& fg, RocklandKind kind,
                    std::size_t node) {
    if (fg.backend == FrequencyGrid::Backend::abelian) {
        const Vec xi = fg.xi_point(node);
        double q = 0;
        for (double v : xi) q += v * v;
        Mat m(1, 1);
        m(0, 0) = q;   // both kinds collapse to |xi|^2 in the abelian case
        return m;
    }
    (void)s;
    const int d = fg.N + 1;
    const double l = fg.lam[node];
    auto ops = HermiteOps::get(fg.N);
    if (kind == RocklandKind::sublaplacian) {
        // pi(-X^2 - Y^2) = |lambda| (harmonic oscillator); spectrum |lambda|(2k+1)
        // in the scaled Hermite basis, assembled as an exact diagonal.
        Mat m = Mat::Zero(d, d);
        for (int k = 0; k < d; ++k) m(k, k) = std::abs(l) * (2.0 * k + 1.0);
        return m;
    }
    // Graded powers X^4 + Y^4 - T^2: pi(X)^4 + pi(Y)^4 + lambda^2 Id, built
    // from the truncated ladder (Hermitian, positive definite).
    // pi(X)^2 = |l| D1^2, pi(Y)^2 = -|l| U1^2, so both fourth powers are
    // l^2 times squares of real symmetric matrices.
    Eigen::MatrixXd D1sq = ops->D1 * ops->D1;
    Eigen::MatrixXd U1sq = ops->U1 * ops->U1;
    Eigen::MatrixXd X4 = (l * l) * (D1sq * D1sq);
    Eigen::MatrixXd Y4 = (l * l) * (U1sq * U1sq);
    Mat m = Mat::Zero(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) m(r, c) = X4(r, c) + Y4(r, c);
    for (int k = 0; k < d; ++k) m(k, k) += l * l;                      // -pi(T)^2
    return m;
}

Mat spectral_power(const GradedStructure& s, const FrequencyGrid& fg, RocklandKind kind,
                   double gamma, std::size_t node) {
    if (gamma == 0.0) return Mat::Identity(fg.mat_dim(), fg.mat_dim());
    if (fg.backend == FrequencyGrid::Backend::abelian ||
        kind == RocklandKind::sublaplacian) {
        Mat R = rockland_matrix(s, fg, kind, node);
        const int d = static_cast<int>(R.rows());
        Mat m = Mat::Zero(d, d);
        for (int k = 0; k < d; ++k)
            m(k, k) = std::pow(1.0 + R(k, k).real(), gamma);
        return m;
    }
    Mat R = rockland_matrix(s, fg, kind, node);
    Eigen::SelfAdjointEigenSolver<Mat> es(R);
    const int d = static_cast<int>(R.rows());
    Eigen::VectorXcd ph(d);
    for (int k = 0; k < d; ++k) ph(k) = std::pow(1.0 + es.eigenvalues()(k), gamma);
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Eigen::VectorXd sublaplacian_power_diag(const FrequencyGrid& fg, double gamma,
                                        std::size_t node) {
    const int d = fg.mat_dim();
    Eigen::VectorXd v(d);
    if (fg.backend == FrequencyGrid::Backend::abelian) {
        const Vec xi = fg.xi_point(node);
        double q = 0;
        for (double t : xi) q += t * t;
        v(0) = std::pow(1.0 + q, gamma);
        return v;
    }
    const double l = std::abs(fg.lam[node]);
    for (int k = 0; k < d; ++k) v(k) = std::pow(1.0 + l * (2.0 * k + 1.0), gamma);
    return v;
}

}   // namespace gpdo
