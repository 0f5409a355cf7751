#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fmcw/errors.hpp"
#include "fmcw/iqcorr.hpp"

namespace fmcw {

namespace {

using Vector5d = Eigen::Matrix<double, 5, 1>;
using Matrix5d = Eigen::Matrix<double, 5, 5>;
using Vector6d = Eigen::Matrix<double, 6, 1>;

// General conic a*x^2 + b*xy + c*y^2 + d*x + e*y + f = 0.
struct Conic {
    double a, b, c, d, e, f;
};

// Center/axes/tilt from conic coefficients; throws DegenerateConic when the
// conic is not a real ellipse.
EllipseFit conic_to_ellipse(const Conic& k) {
    const double disc = k.b * k.b - 4.0 * k.a * k.c;
    if (!(disc < 0.0))
        throw DegenerateConic("conic is not elliptic");

    const double den = 4.0 * k.a * k.c - k.b * k.b;
    const double x0 = (k.b * k.e - 2.0 * k.c * k.d) / den;
    const double y0 = (k.b * k.d - 2.0 * k.a * k.e) / den;

    // Constant after recentering: mu + quadratic form == 0 on the ellipse.
    const double mu = k.a * x0 * x0 + k.b * x0 * y0 + k.c * y0 * y0 +
                      k.d * x0 + k.e * y0 + k.f;

    Eigen::Matrix2d qf;
    qf << k.a, k.b / 2.0, k.b / 2.0, k.c;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(qf);
    const Eigen::Vector2d evals = es.eigenvalues();
    // Real ellipse needs both eigenvalues on the opposite sign of mu.
    if (!(evals(0) * -mu > 0.0 && evals(1) * -mu > 0.0))
        throw DegenerateConic("conic has no real ellipse points");

    const double r0 = std::sqrt(-mu / evals(0));
    const double r1 = std::sqrt(-mu / evals(1));

    EllipseFit fit;
    fit.center_i = x0;
    fit.center_q = y0;
    // Smaller |eigenvalue| -> longer axis.
    Eigen::Vector2d major_dir;
    if (r0 >= r1) {
        fit.semi_major = r0;
        fit.semi_minor = r1;
        major_dir = es.eigenvectors().col(0);
    } else {
        fit.semi_major = r1;
        fit.semi_minor = r0;
        major_dir = es.eigenvectors().col(1);
    }
    double tilt = std::atan2(major_dir(1), major_dir(0));
    if (tilt > std::numbers::pi / 2.0) tilt -= std::numbers::pi;
    if (tilt <= -std::numbers::pi / 2.0) tilt += std::numbers::pi;
    fit.tilt_rad = tilt;
    return fit;
}

} // namespace

EllipseFit fit_ellipse_taubin(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 6)
        throw InsufficientPoints("ellipse fit needs at least 6 points");

    // Normalize for conditioning: shift to the centroid, scale by rms radius.
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    const double n = static_cast<double>(points.size());
    mx /= n;
    my /= n;
    double srad = 0.0;
    for (const auto& [x, y] : points)
        srad += (x - mx) * (x - mx) + (y - my) * (y - my);
    const double scale = std::sqrt(std::max(srad / n, 1e-300));

    // Design moments M = mean(z z^T) with z = (x^2, xy, y^2, x, y, 1), and the
    // Taubin normalization matrix P = mean(grad z grad z^T) over (x, y).
    Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
    Matrix5d P = Matrix5d::Zero();
    for (const auto& [px, py] : points) {
        const double x = (px - mx) / scale;
        const double y = (py - my) / scale;
        Vector6d z;
        z << x * x, x * y, y * y, x, y, 1.0;
        M += z * z.transpose();
        Vector5d gx, gy;
        gx << 2.0 * x, y, 0.0, 1.0, 0.0;
        gy << 0.0, x, 2.0 * y, 0.0, 1.0;
        P += gx * gx.transpose() + gy * gy.transpose();
    }
    M /= n;
    P /= n;

    // Eliminate the constant coefficient: for fixed leading coefficients v,
    // the optimal f is -(m^T v); the reduced problem is a 5x5 generalized
    // symmetric eigenproblem against P.
    const Matrix5d M11 = M.topLeftCorner<5, 5>();
    const Vector5d m12 = M.topRightCorner<5, 1>();
    const double m22 = M(5, 5);
    const Matrix5d Mred = M11 - (m12 * m12.transpose()) / m22;

    Eigen::LLT<Matrix5d> llt(P);
    if (llt.info() != Eigen::Success)
        throw DegenerateConic("Taubin normalization matrix is singular "
                              "(collinear or ill-conditioned points)");
    const Matrix5d Linv = Matrix5d(llt.matrixL()).inverse();
    const Matrix5d C = Linv * Mred * Linv.transpose();
    Eigen::SelfAdjointEigenSolver<Matrix5d> es(C);
    if (es.info() != Eigen::Success)
        throw DegenerateConic("eigensolve failed on the reduced conic system");
    const Vector5d v = Linv.transpose() * es.eigenvectors().col(0);
    const double f_norm = -(m12.dot(v)) / m22;

    Conic kn{v(0), v(1), v(2), v(3), v(4), f_norm};

    // Undo the normalization: substitute x -> (x - mx)/s, y -> (y - my)/s.
    Conic k;
    const double s = scale;
    k.a = kn.a;
    k.b = kn.b;
    k.c = kn.c;
    k.d = -2.0 * kn.a * mx - kn.b * my + kn.d * s;
    k.e = -kn.b * mx - 2.0 * kn.c * my + kn.e * s;
    k.f = kn.a * mx * mx + kn.b * mx * my + kn.c * my * my - kn.d * s * mx -
          kn.e * s * my + kn.f * s * s;

    EllipseFit fit = conic_to_ellipse(k);

    // Algebraic residual in normalized coordinates (Taubin gauge v^T P v = 1).
    const double num = v.dot(Mred * v);
    fit.algebraic_residual = std::sqrt(std::max(num, 0.0));

    double acc = 0.0;
    for (const auto& [x, y] : points) {
        const double d = point_ellipse_distance(fit, x, y);
        acc += d * d;
    }
    fit.geometric_rms = std::sqrt(acc / n);
    return fit;
}

// Robust bisection on the canonical-frame distance equation
// F(t) = (a*u/(t+a^2))^2 + (b*v/(t+b^2))^2 - 1 = 0, t in (-b^2, inf).
double point_ellipse_distance(const EllipseFit& fit, double x, double y) {
    const double cs = std::cos(fit.tilt_rad);
    const double sn = std::sin(fit.tilt_rad);
    const double dx = x - fit.center_i;
    const double dy = y - fit.center_q;
    double u = std::abs(cs * dx + sn * dy);
    double v = std::abs(-sn * dx + cs * dy);
    const double a = fit.semi_major;
    const double b = fit.semi_minor;

    if (v == 0.0) {
        if (u < (a * a - b * b) / a) {
            const double xe = a * a * u / (a * a - b * b);
            const double ye = b * std::sqrt(std::max(0.0, 1.0 - (xe / a) * (xe / a)));
            return std::hypot(u - xe, ye);
        }
        return std::abs(u - a);
    }
    if (u == 0.0) return std::abs(v - b);

    double t_lo = -b * b + b * v;
    double t_hi = -b * b + std::hypot(a * u, b * v);
    auto F = [&](double t) {
        const double fu = a * u / (t + a * a);
        const double fv = b * v / (t + b * b);
        return fu * fu + fv * fv - 1.0;
    };
    // F decreases monotonically from F(t_lo) >= 0 to F(t_hi) <= 0.
    for (int iter = 0; iter < 200; ++iter) {
        const double t = 0.5 * (t_lo + t_hi);
        if (t == t_lo || t == t_hi) break;
        if (F(t) > 0.0)
            t_lo = t;
        else
            t_hi = t;
    }
    const double t = 0.5 * (t_lo + t_hi);
    const double xe = a * a * u / (t + a * a);
    const double ye = b * b * v / (t + b * b);
    return std::hypot(u - xe, v - ye);
}

namespace {

double lm_cost(const EllipseFit& fit,
               const std::vector<std::pair<double, double>>& pts) {
    double acc = 0.0;
    for (const auto& [x, y] : pts) {
        const double d = point_ellipse_distance(fit, x, y);
        acc += d * d;
    }
    return acc;
}

EllipseFit fit_from_params(const Vector5d& p) {
    EllipseFit f;
    f.center_i = p(0);
    f.center_q = p(1);
    f.semi_major = p(2);
    f.semi_minor = p(3);
    f.tilt_rad = p(4);
    if (f.semi_major < f.semi_minor) {
        std::swap(f.semi_major, f.semi_minor);
        f.tilt_rad += std::numbers::pi / 2.0;
    }
    if (f.tilt_rad > std::numbers::pi / 2.0) f.tilt_rad -= std::numbers::pi;
    if (f.tilt_rad <= -std::numbers::pi / 2.0) f.tilt_rad += std::numbers::pi;
    return f;
}

} // namespace

EllipseFit refine_ellipse_lm(const EllipseFit& init,
                             const std::vector<std::pair<double, double>>& points,
                             double tol, std::size_t max_iters) {
    if (points.empty()) throw InsufficientPoints("no points to refine against");

    Vector5d p;
    p << init.center_i, init.center_q, init.semi_major, init.semi_minor,
        init.tilt_rad;
    EllipseFit best = init;
    double cost = lm_cost(best, points);
    best.geometric_rms = std::sqrt(cost / static_cast<double>(points.size()));
    best.iterations = 0;
    best.converged = best.geometric_rms <= tol;
    if (max_iters == 0) {
        best.converged = false;
        return best;
    }

    const std::size_t npts = points.size();
    double lambda = 1e-3;
    std::size_t iter = 0;
    for (; iter < max_iters; ++iter) {
        // Residuals and forward-difference Jacobian.
        Eigen::VectorXd r(npts);
        const EllipseFit cur = fit_from_params(p);
        for (std::size_t i = 0; i < npts; ++i)
            r(static_cast<Eigen::Index>(i)) =
                point_ellipse_distance(cur, points[i].first, points[i].second);

        Eigen::MatrixXd J(npts, 5);
        for (int c = 0; c < 5; ++c) {
            Vector5d ph = p;
            const double h = 1e-7 * std::max(1.0, std::abs(p(c)));
            ph(c) += h;
            const EllipseFit fh = fit_from_params(ph);
            for (std::size_t i = 0; i < npts; ++i) {
                const double dh =
                    point_ellipse_distance(fh, points[i].first, points[i].second);
                J(static_cast<Eigen::Index>(i), c) =
                    (dh - r(static_cast<Eigen::Index>(i))) / h;
            }
        }

        const Matrix5d JtJ = J.transpose() * J;
        const Vector5d g = J.transpose() * r;

        bool accepted = false;
        for (int tries = 0; tries < 12; ++tries) {
            Matrix5d A = JtJ;
            for (int c = 0; c < 5; ++c)
                A(c, c) += lambda * std::max(JtJ(c, c), 1e-12);
            const Vector5d step = A.ldlt().solve(-g);
            Vector5d pn = p + step;
            if (pn(2) <= 0.0 || pn(3) <= 0.0) {
                lambda *= 10.0;
                continue;
            }
            const EllipseFit cand = fit_from_params(pn);
            const double cn = lm_cost(cand, points);
            if (cn < cost) {
                p = pn;
                cost = cn;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) break;
        const double rms = std::sqrt(cost / static_cast<double>(npts));
        if (rms <= tol) {
            ++iter;
            break;
        }
    }

    best = fit_from_params(p);
    best.algebraic_residual = init.algebraic_residual;
    best.geometric_rms = std::sqrt(cost / static_cast<double>(npts));
    best.iterations = iter;
    best.converged = best.geometric_rms <= tol;
    return best;
}

} // namespace fmcw
