#include "qcreg/ista.hpp"

#include <cmath>
#include <stdexcept>

#include "qcreg/shrink.hpp"

namespace qcreg {

LinearOperator LinearOperator::diagonal(CoeffVec k)
{
    LinearOperator op;
    op.dim_in = op.dim_out = k.size();
    auto mul = [k](const CoeffVec& v) {
        if (v.size() != k.size())
            throw std::invalid_argument("diagonal operator: dimension mismatch");
        CoeffVec out(v.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            out[i] = k[i] * v[i];
        return out;
    };
    op.apply = mul;
    op.adjoint = mul;  // real diagonal is self-adjoint
    return op;
}

double PointwisePenalty::value(const CoeffVec& f) const
{
    if (f.size() != w.size() || f.size() != p.size())
        throw std::invalid_argument("PointwisePenalty: dimension mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        acc += w[i] * std::pow(std::fabs(f[i]), p[i]);
    return acc;
}

PointwisePenalty PointwisePenalty::scaled(double alpha) const
{
    PointwisePenalty out = *this;
    for (double& v : out.w)
        v *= alpha;
    return out;
}

double norm_estimate(const LinearOperator& K, std::uint64_t seed)
{
    if (K.dim_in == 0)
        return 0.0;
    CounterRng rng = CounterRng::from_seed(seed);
    CoeffVec v(K.dim_in);
    for (double& x : v)
        x = rng.next_range(-1.0, 1.0);
    double nv = norm2(v);
    if (nv == 0.0)
        v[0] = nv = 1.0;
    for (double& x : v)
        x /= nv;
    double est = 0.0;
    for (int it = 0; it < 100; ++it) {
        CoeffVec u = K.adjoint(K.apply(v));
        double nu = norm2(u);
        if (nu == 0.0)
            return 0.0;
        double next = std::sqrt(nu);  // ||K*K v|| ~ sigma^2 for unit v
        for (double& x : u)
            x /= nu;
        v = std::move(u);
        if (it > 0 && std::fabs(next - est) <= 1e-6 * std::max(1.0, next)) {
            est = next;
            break;
        }
        est = next;
    }
    return est;
}

double adjoint_mismatch(const LinearOperator& K, int trials, std::uint64_t seed)
{
    CounterRng rng = CounterRng::from_seed(seed);
    double worst = 0.0;
    for (int t = 0; t < trials; ++t) {
        CoeffVec u(K.dim_in), v(K.dim_out);
        for (double& x : u)
            x = rng.next_range(-1.0, 1.0);
        for (double& x : v)
            x = rng.next_range(-1.0, 1.0);
        worst = std::max(worst,
                         std::fabs(inner(K.apply(u), v) - inner(u, K.adjoint(v))));
    }
    return worst;
}

ScaledProblem rescale_problem(const LinearOperator& K, const CoeffVec& g)
{
    double s = 1.05 * norm_estimate(K);
    if (s == 0.0)
        throw std::domain_error("rescale_problem: zero operator");
    LinearOperator scaled;
    scaled.dim_in = K.dim_in;
    scaled.dim_out = K.dim_out;
    auto apply = K.apply;
    auto adj = K.adjoint;
    scaled.apply = [apply, s](const CoeffVec& v) {
        CoeffVec out = apply(v);
        for (double& x : out)
            x /= s;
        return out;
    };
    scaled.adjoint = [adj, s](const CoeffVec& v) {
        CoeffVec out = adj(v);
        for (double& x : out)
            x /= s;
        return out;
    };
    CoeffVec gs = g;
    for (double& x : gs)
        x /= s;
    return {std::move(scaled), std::move(gs), s};
}

CoeffVec apply_T(const CoeffVec& f, const CoeffVec& g, const LinearOperator& K,
                 const PointwisePenalty& pen)
{
    CoeffVec r = K.apply(f);
    if (r.size() != g.size())
        throw std::invalid_argument("apply_T: observation dimension mismatch");
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = g[i] - r[i];
    CoeffVec b = K.adjoint(r);
    CoeffVec out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        double bi = f[i] + b[i];
        out[i] = (pen.w[i] == 0.0) ? bi : shrink_single(bi, pen.w[i], pen.p[i]);
    }
    return out;
}

double objective_phi(const CoeffVec& f, const CoeffVec& g, const LinearOperator& K,
                     const PointwisePenalty& pen)
{
    CoeffVec r = K.apply(f);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        double d = r[i] - g[i];
        acc += d * d;
    }
    return acc + pen.value(f);
}

double surrogate_value(const CoeffVec& f, const CoeffVec& a, const CoeffVec& g,
                       const LinearOperator& K, const PointwisePenalty& pen)
{
    double phi = objective_phi(f, g, K, pen);
    CoeffVec d(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        d[i] = f[i] - a[i];
    return phi + norm2_sq(d) - norm2_sq(K.apply(d));
}

IterateResult iterate(const CoeffVec& f0, const CoeffVec& g, const LinearOperator& K,
                      const PointwisePenalty& pen, const IterateOptions& opt)
{
    double nrm = norm_estimate(K);
    if (!(nrm < 1.0))
        throw std::domain_error("iterate: operator norm estimate " +
                                std::to_string(nrm) +
                                " is not < 1; rescale_problem first");
    IterateResult res;
    CoeffVec f = f0;
    double obj = objective_phi(f, g, K, pen);
    for (int it = 0; it < opt.max_iters; ++it) {
        CoeffVec next = apply_T(f, g, K, pen);
        double step = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) {
            double d = next[i] - f[i];
            step += d * d;
        }
        step = std::sqrt(step);
        double next_obj = objective_phi(next, g, K, pen);
        double sur = surrogate_value(next, f, g, K, pen);
        res.history.push_back({it, step, next_obj, sur});
        if (next_obj > obj + 1e-10)
            throw std::runtime_error("iterate: objective increased by " +
                                     std::to_string(next_obj - obj) +
                                     " (norm bound violated?)");
        f = std::move(next);
        obj = next_obj;
        if (step <= opt.step_tol) {
            res.converged = true;
            break;
        }
    }
    res.f = std::move(f);
    return res;
}

std::vector<PathPoint> regularization_path(const CoeffVec& f_true, const CoeffVec& k_diag,
                                           const PointwisePenalty& pen,
                                           const std::vector<double>& eps_levels,
                                           std::uint64_t seed)
{
    const std::size_t dim = f_true.size();
    if (k_diag.size() != dim)
        throw std::invalid_argument("regularization_path: dimension mismatch");
    // the minimal-penalty solution of K f = K f_true, coordinate-wise on a
    // diagonal operator: the true value where k != 0, otherwise the penalty
    // minimum 0
    CoeffVec f_dagger(dim);
    for (std::size_t i = 0; i < dim; ++i)
        f_dagger[i] = (k_diag[i] != 0.0) ? f_true[i] : 0.0;

    LinearOperator K = LinearOperator::diagonal(k_diag);
    CoeffVec g0 = K.apply(f_true);
    CounterRng rng = CounterRng::from_seed(seed);

    std::vector<PathPoint> out;
    for (std::size_t lev = 0; lev < eps_levels.size(); ++lev) {
        double eps = eps_levels[lev];
        CounterRng lev_rng = rng.split(lev);
        CoeffVec noise(dim);
        for (double& x : noise)
            x = lev_rng.next_gaussian();
        // reuse one fixed direction per level, scaled to norm eps
        double nn = norm2(noise);
        CoeffVec g = g0;
        if (nn > 0.0 && eps > 0.0)
            for (std::size_t i = 0; i < dim; ++i)
                g[i] += noise[i] * (eps / nn);
        double alpha = eps;  // the built-in admissible rule alpha(eps) = eps
        IterateOptions opt;
        opt.step_tol = std::min(1e-10, 1e-4 * eps * eps);
        IterateResult sol = iterate(CoeffVec(dim, 0.0), g, K,
                                    pen.scaled(alpha), opt);
        CoeffVec d(dim);
        for (std::size_t i = 0; i < dim; ++i)
            d[i] = sol.f[i] - f_dagger[i];
        out.push_back({eps, alpha, norm2(d)});
    }
    return out;
}

}  // namespace qcreg
