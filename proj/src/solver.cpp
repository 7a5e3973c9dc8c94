#include "stokeslab/solver.hpp"

#ifdef STOKESLAB_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#else
#include <Eigen/SparseLU>
#endif
#include <chrono>

namespace stokeslab {

long solved_dof_count(const SaddleSystem& sys) {
    return static_cast<long>(sys.dofmap.interior.size()) + sys.dofmap.n_pressure;
}

// The system solved is the symmetric KKT form
//   [ A  -B^T  0 ] [u]   [ F]
//   [-B   0    c ] [p] = [ G]     (B u = -G once mu settles)
//   [ 0  c^T   0 ] [mu]  [ 0]
// A dense multiplier row ruins sparse-LU fill-in, so the factorization works
// on the (n-1) x (n-1) block M = [A -B^T; -B 0] instead: mu follows from the
// rank condition (the kernel of M^T is the constant-pressure mode), one
// pressure row is pinned to make M invertible, and the pressure is shifted
// onto the exact zero-mean representative afterwards. The residual reported
// at the end is measured against the full KKT system.
std::pair<DiscreteSolution, SolveReport> solve(const SaddleSystem& sys) {
    const auto t0 = std::chrono::steady_clock::now();
    const int ni = static_cast<int>(sys.A.rows());
    const int np = sys.dofmap.n_pressure;
    const int n = ni + np;
    const int pin = ni + np - 1;  // pressure row used to fix the constant mode

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(sys.A.nonZeros() + 2 * sys.B.nonZeros() + 1);
    for (int k = 0; k < sys.A.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.A, k); it; ++it) {
            trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
        }
    }
    for (int k = 0; k < sys.B.outerSize(); ++k) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.B, k); it; ++it) {
            const int p = ni + static_cast<int>(it.row());
            const int u = static_cast<int>(it.col());
            trip.emplace_back(u, p, -it.value());
            if (p != pin) trip.emplace_back(p, u, -it.value());
        }
    }
    trip.emplace_back(pin, pin, 1.0);

    Eigen::SparseMatrix<double> M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());

    // mu from the compatibility condition of the singular block system
    const double c_total = sys.c.sum();
    const double mu = sys.G.sum() / c_total;

    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
    rhs.segment(0, ni) = sys.F;
    rhs.segment(ni, np) = sys.G - mu * sys.c;
    rhs(pin) = 0.0;

#ifdef STOKESLAB_HAVE_UMFPACK
    Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
#else
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
#endif
    lu.compute(M);
    if (lu.info() != Eigen::Success) {
        throw SolverError("saddle-point factorization failed (singular system?)");
    }
    Eigen::VectorXd x = lu.solve(rhs);
    if (lu.info() != Eigen::Success) throw SolverError("saddle-point back substitution failed");

    // shift the pressure onto the zero-mean representative
    Eigen::VectorXd pressure = x.segment(ni, np);
    pressure.array() -= sys.c.dot(pressure) / c_total;

    // residual of the full KKT system, including the multiplier row
    Eigen::VectorXd r1 = sys.F - sys.A * x.segment(0, ni);
    r1 += Eigen::VectorXd(sys.B.transpose() * pressure);
    // row 2 reads -B u + c mu = G
    Eigen::VectorXd r2 = sys.G - mu * sys.c;
    r2 += Eigen::VectorXd(sys.B * x.segment(0, ni));
    const double r3 = sys.c.dot(pressure);
    double rhs_norm = std::sqrt(sys.F.squaredNorm() + sys.G.squaredNorm());
    if (rhs_norm == 0.0) rhs_norm = 1.0;
    const double res =
        std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3 * r3) / rhs_norm;
    if (!(res <= 1e-10)) throw SolverError("solver residual above tolerance: " + std::to_string(res));

    DiscreteSolution sol;
    sol.method = sys.method;
    sol.velocity = sys.g_lift;
    for (size_t i = 0; i < sys.dofmap.interior.size(); ++i) {
        sol.velocity(sys.dofmap.interior[i]) = x(static_cast<int>(i));
    }
    sol.pressure = std::move(pressure);
    sol.multiplier = mu;

    SolveReport rep;
    rep.relative_residual = res;
    rep.n_velocity_interior = ni;
    rep.n_pressure = np;
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {std::move(sol), rep};
}

}  // namespace stokeslab
