#include "qcreg/learn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

#include "qcreg/rng.hpp"

namespace qcreg {

namespace {

constexpr double kFeasTol = 1e-12;

// x_u - x_v <= c over 0-based step-value indices
struct DiffConstraint {
    int u, v;
    double c;
};

// Difference-constraint feasibility via Bellman-Ford from a virtual source
// connected to every node with weight 0.  Returns a feasible point (the
// shortest-path distances) or nullopt on a negative cycle.
std::optional<std::vector<double>> bellman_ford(int dim, const std::vector<DiffConstraint>& cs)
{
    std::vector<double> dist(static_cast<std::size_t>(dim), 0.0);
    bool changed = true;
    for (int round = 0; round <= dim && changed; ++round) {
        changed = false;
        for (const DiffConstraint& e : cs) {
            double cand = dist[static_cast<std::size_t>(e.v)] + e.c;
            if (cand < dist[static_cast<std::size_t>(e.u)] - 1e-15) {
                dist[static_cast<std::size_t>(e.u)] = cand;
                changed = true;
            }
        }
    }
    if (changed)
        return std::nullopt;
    return dist;
}

// monotone chains of the valley with trough at 1-based pivot v:
// x_1 >= ... >= x_v <= x_{v+1} <= ... <= x_B
void append_valley_chain(std::vector<DiffConstraint>& cs, int dim, int pivot)
{
    for (int i = 0; i + 1 < pivot; ++i)
        cs.push_back({i + 1, i, 0.0});  // x_{i+1} <= x_i
    for (int i = pivot - 1; i + 1 < dim; ++i)
        cs.push_back({i, i + 1, 0.0});  // x_i <= x_{i+1}
}

// winner constraints: bin r of pair i beats every other bin by the margin
void append_win_constraints(std::vector<DiffConstraint>& cs, const KnPair& pr, int r,
                            double margin)
{
    const Candidate& cr = pr.cands[static_cast<std::size_t>(r) - 1];
    for (const Candidate& other : pr.cands) {
        if (other.bin == r)
            continue;
        // q_r + x_r + margin <= q_s + x_s
        cs.push_back({r - 1, other.bin - 1, other.q - cr.q - margin});
    }
}

double max_violation(const std::vector<double>& x, const std::vector<DiffConstraint>& cs)
{
    double worst = 0.0;
    for (const DiffConstraint& e : cs)
        worst = std::max(worst, x[static_cast<std::size_t>(e.u)] -
                                    x[static_cast<std::size_t>(e.v)] - e.c);
    return worst;
}

// Dykstra's alternating projections onto the halfspaces x_u - x_v <= c,
// starting from x0: converges to the Euclidean projection of x0 onto the
// intersection (used to anchor unbounded feasible sets at minimum norm).
std::vector<double> dykstra_project(std::vector<double> x,
                                    const std::vector<DiffConstraint>& cs, int cycles)
{
    std::vector<double> corr(cs.size(), 0.0);  // correction along (e_u - e_v)
    for (int it = 0; it < cycles; ++it) {
        double moved = 0.0;
        for (std::size_t m = 0; m < cs.size(); ++m) {
            const DiffConstraint& e = cs[m];
            double& xu = x[static_cast<std::size_t>(e.u)];
            double& xv = x[static_cast<std::size_t>(e.v)];
            // undo previous correction, then project
            xu += corr[m];
            xv -= corr[m];
            double viol = xu - xv - e.c;
            double step = (viol > 0.0) ? 0.5 * viol : 0.0;
            xu -= step;
            xv += step;
            moved = std::max(moved, std::fabs(step - corr[m]));
            corr[m] = step;
        }
        if (moved < 1e-14 && max_violation(x, cs) <= kFeasTol)
            break;
    }
    return x;
}

// pushes x exactly into the valley cone with the given 1-based pivot;
// perturbations are bounded by the incoming constraint violation
void valley_clip(std::vector<double>& x, int pivot)
{
    for (int i = pivot - 2; i >= 0; --i)
        if (x[static_cast<std::size_t>(i)] < x[static_cast<std::size_t>(i) + 1])
            x[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i) + 1];
    for (std::size_t i = static_cast<std::size_t>(pivot) - 1; i + 1 < x.size(); ++i)
        if (x[i + 1] < x[i])
            x[i + 1] = x[i];
}

int argmin_index(const std::vector<double>& x)
{
    return static_cast<int>(std::min_element(x.begin(), x.end()) - x.begin());
}

// L2 isotonic regression (pool adjacent violators), non-decreasing
std::vector<double> pava_increasing(const std::vector<double>& y)
{
    std::vector<double> mean;
    std::vector<int> count;
    for (double v : y) {
        mean.push_back(v);
        count.push_back(1);
        while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
            double total = mean.back() * count.back() + mean[mean.size() - 2] * count[count.size() - 2];
            int c = count.back() + count[count.size() - 2];
            mean.pop_back();
            count.pop_back();
            mean.back() = total / c;
            count.back() = c;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (std::size_t b = 0; b < mean.size(); ++b)
        out.insert(out.end(), static_cast<std::size_t>(count[b]), mean[b]);
    return out;
}

double sq_dist(const std::vector<double>& a, const std::vector<double>& b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

}  // namespace

std::vector<TripleConstraint> quasiconvex_triples(int bins)
{
    std::vector<TripleConstraint> out;
    for (int r = 1; r <= bins; ++r)
        for (int s = r + 1; s <= bins; ++s)
            for (int t = s + 1; t <= bins; ++t)
                out.push_back({r, s, t});
    return out;
}

double triple_margin(const std::vector<double>& x, const TripleConstraint& c)
{
    double xr = x[static_cast<std::size_t>(c.r) - 1];
    double xs = x[static_cast<std::size_t>(c.s) - 1];
    double xt = x[static_cast<std::size_t>(c.t) - 1];
    return std::fabs(xr - xt) + xr + xt - 2.0 * xs;
}

KnProblem build_kn(const CoordSlice& slice, const GridSpec& grid)
{
    KnProblem kp;
    kp.grid = grid;
    for (const auto& [f, g] : slice) {
        if (!grid.contains(f) || !grid.contains(g))
            throw std::out_of_range("build_kn: training value outside grid");
        KnPair pr;
        pr.f = f;
        pr.g = g;
        pr.d = (f - g) * (f - g);
        pr.f_bin = grid.bin_index(f);
        pr.cands = candidate_points(g, grid);
        kp.pairs.push_back(std::move(pr));
    }
    return kp;
}

std::vector<int> KnProblem::winners(const std::vector<double>& x) const
{
    std::vector<int> out;
    out.reserve(pairs.size());
    for (const KnPair& pr : pairs) {
        int g_bin = grid.bin_index(pr.g);
        int best = 0;
        double best_v = std::numeric_limits<double>::infinity();
        for (const Candidate& c : pr.cands) {
            double v = c.q + x[static_cast<std::size_t>(c.bin) - 1];
            bool better = v < best_v;
            if (!better && v == best_v) {
                if (c.bin == g_bin && best != g_bin)
                    better = true;
                else if (best != g_bin && c.bin < best)
                    better = true;
            }
            if (better) {
                best = c.bin;
                best_v = v;
            }
        }
        out.push_back(best);
    }
    return out;
}

double KnProblem::eval(const std::vector<double>& x) const
{
    double acc = 0.0;
    for (const KnPair& pr : pairs) {
        double m = std::numeric_limits<double>::infinity();
        for (const Candidate& c : pr.cands)
            m = std::min(m, c.q + x[static_cast<std::size_t>(c.bin) - 1]);
        double term = m - pr.d - x[static_cast<std::size_t>(pr.f_bin) - 1];
        acc += term * term;
    }
    return acc;
}

std::vector<double> KnProblem::subgradient(const std::vector<double>& x) const
{
    std::vector<double> g(x.size(), 0.0);
    std::vector<int> w = winners(x);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const KnPair& pr = pairs[i];
        const Candidate& cw = pr.cands[static_cast<std::size_t>(w[i]) - 1];
        double term = cw.q + x[static_cast<std::size_t>(cw.bin) - 1] - pr.d -
                      x[static_cast<std::size_t>(pr.f_bin) - 1];
        g[static_cast<std::size_t>(cw.bin) - 1] += 2.0 * term;
        g[static_cast<std::size_t>(pr.f_bin) - 1] -= 2.0 * term;
    }
    return g;
}

std::vector<double> project_quasiconvex(const std::vector<double>& x)
{
    const std::size_t n = x.size();
    if (n < 3 || is_quasiconvex(x))
        return x;
    // valley = non-increasing prefix of length v, non-decreasing suffix;
    // project both pieces independently for every split and keep the best
    std::vector<double> best;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v <= n; ++v) {
        std::vector<double> prefix_rev(x.rend() - static_cast<std::ptrdiff_t>(v), x.rend());
        std::vector<double> pre = pava_increasing(prefix_rev);  // reversed prefix
        std::vector<double> suf =
            pava_increasing(std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(v), x.end()));
        std::vector<double> cand(pre.rbegin(), pre.rend());
        cand.insert(cand.end(), suf.begin(), suf.end());
        double d = sq_dist(cand, x);
        if (d < best_d) {
            best_d = d;
            best = std::move(cand);
        }
    }
    return best;
}

double SolverConfig::margin(const GridSpec& grid) const
{
    if (delta >= 0.0)
        return delta;
    return std::min(1e-9, 0.25 * grid.eps * grid.eps);
}

namespace {

// Shared machinery: find a valley pivot admitting the assignment, return the
// pivot and the winner-constraint list.
struct FeasibleSystem {
    int pivot;  // 1-based
    std::vector<DiffConstraint> constraints;
    std::vector<double> point;
};

std::optional<FeasibleSystem> find_feasible_system(const KnProblem& kp,
                                                   const std::vector<int>& bins,
                                                   double margin)
{
    const int dim = kp.grid.bin_count();
    std::vector<DiffConstraint> wins;
    for (std::size_t i = 0; i < kp.pairs.size(); ++i)
        append_win_constraints(wins, kp.pairs[i], bins[i], margin);
    for (int pivot = 1; pivot <= dim; ++pivot) {
        std::vector<DiffConstraint> cs = wins;
        append_valley_chain(cs, dim, pivot);
        if (auto pt = bellman_ford(dim, cs))
            return FeasibleSystem{pivot, std::move(cs), std::move(*pt)};
    }
    return std::nullopt;
}

// Restricted K_n over the assignment's polytope (where pair i's min is
// attained at bin r_i, so the objective is a convex quadratic), minimized by
// projected gradient with alternating-projection repair.
std::vector<double> refine_on_polytope(const KnProblem& kp, const std::vector<int>& bins,
                                       const FeasibleSystem& sys)
{
    auto quad = [&](const std::vector<double>& x) {
        double acc = 0.0;
        for (std::size_t i = 0; i < kp.pairs.size(); ++i) {
            const KnPair& pr = kp.pairs[i];
            const Candidate& cr = pr.cands[static_cast<std::size_t>(bins[i]) - 1];
            double term = cr.q + x[static_cast<std::size_t>(bins[i]) - 1] - pr.d -
                          x[static_cast<std::size_t>(pr.f_bin) - 1];
            acc += term * term;
        }
        return acc;
    };
    auto repair = [&](std::vector<double> x) {
        for (int pass = 0; pass < 60 && max_violation(x, sys.constraints) > kFeasTol; ++pass)
            for (const DiffConstraint& e : sys.constraints) {
                double viol = x[static_cast<std::size_t>(e.u)] -
                              x[static_cast<std::size_t>(e.v)] - e.c;
                if (viol > 0.0) {
                    x[static_cast<std::size_t>(e.u)] -= 0.5 * viol;
                    x[static_cast<std::size_t>(e.v)] += 0.5 * viol;
                }
            }
        return x;
    };

    std::vector<double> x = sys.point;
    std::vector<double> best = x;
    double best_q = quad(x);
    const double step = 1.0 / (4.0 * static_cast<double>(kp.pairs.size()) + 1.0);
    for (int it = 0; it < 400; ++it) {
        std::vector<double> grad(x.size(), 0.0);
        for (std::size_t i = 0; i < kp.pairs.size(); ++i) {
            const KnPair& pr = kp.pairs[i];
            const Candidate& cr = pr.cands[static_cast<std::size_t>(bins[i]) - 1];
            double term = cr.q + x[static_cast<std::size_t>(bins[i]) - 1] - pr.d -
                          x[static_cast<std::size_t>(pr.f_bin) - 1];
            grad[static_cast<std::size_t>(bins[i]) - 1] += 2.0 * term;
            grad[static_cast<std::size_t>(pr.f_bin) - 1] -= 2.0 * term;
        }
        for (std::size_t j = 0; j < x.size(); ++j)
            x[j] -= step * grad[j];
        x = repair(std::move(x));
        double q = quad(x);
        if (q < best_q - 1e-15) {
            best_q = q;
            best = x;
        }
    }
    valley_clip(best, sys.pivot);
    return best;
}

std::optional<std::vector<double>> solve_assignment(const KnProblem& kp,
                                                    const std::vector<int>& bins,
                                                    const SolverConfig& cfg, bool refine)
{
    auto sys = find_feasible_system(kp, bins, cfg.margin(kp.grid));
    if (!sys)
        return std::nullopt;
    if (refine)
        return refine_on_polytope(kp, bins, *sys);
    // anchor the unbounded feasible set: minimum-norm feasible point
    std::vector<double> x = dykstra_project(std::vector<double>(kp.grid.bin_count(), 0.0),
                                            sys->constraints, 400);
    if (max_violation(x, sys->constraints) > kFeasTol)
        x = sys->point;  // Dykstra not converged; fall back to the BF point
    valley_clip(x, sys->pivot);
    return x;
}

std::vector<int> data_bin_assignment(const KnProblem& kp)
{
    std::vector<int> bins;
    bins.reserve(kp.pairs.size());
    for (const KnPair& pr : kp.pairs)
        bins.push_back(kp.grid.bin_index(pr.g));
    return bins;
}

// coordinate contribution to objective_I for the learned step values
double coord_objective(const KnProblem& kp, const std::vector<double>& x)
{
    double acc = 0.0;
    std::vector<int> w = kp.winners(x);
    for (std::size_t i = 0; i < kp.pairs.size(); ++i) {
        const Candidate& c = kp.pairs[i].cands[static_cast<std::size_t>(w[i]) - 1];
        double r = c.x - kp.pairs[i].f;
        acc += r * r;
    }
    return acc;
}

CoordSlice slice_at(const TrainingSet& ts, std::size_t gamma)
{
    CoordSlice s;
    s.reserve(ts.size());
    for (const TrainingPair& pr : ts)
        s.emplace_back(pr.clean.at(gamma), pr.noisy.at(gamma));
    return s;
}

void check_validated(const TrainingSet& ts, const GridSpec& grid)
{
    std::vector<Violation> v = validate_problem(ts, grid);
    if (!v.empty())
        throw std::invalid_argument("learn: invalid problem: " + v.front().message);
}

}  // namespace

SearchResult candidate_search(const CoordSlice& slice, const GridSpec& grid,
                              const SolverConfig& cfg)
{
    KnProblem kp = build_kn(slice, grid);
    const std::size_t m = kp.pairs.size();
    const double margin = cfg.margin(grid);

    // per-pair candidate lists sorted by data-fit score, optionally pruned
    struct Scored {
        int bin;
        double score;
    };
    std::vector<std::vector<Scored>> lists(m);
    for (std::size_t i = 0; i < m; ++i) {
        for (const Candidate& c : kp.pairs[i].cands) {
            double d = c.x - kp.pairs[i].f;
            lists[i].push_back({c.bin, d * d});
        }
        std::sort(lists[i].begin(), lists[i].end(),
                  [](const Scored& a, const Scored& b) {
                      return a.score < b.score || (a.score == b.score && a.bin < b.bin);
                  });
        if (cfg.prune_k > 0 && lists[i].size() > static_cast<std::size_t>(cfg.prune_k))
            lists[i].resize(static_cast<std::size_t>(cfg.prune_k));
    }

    // guaranteed-feasible fallback: every pair keeps its own data bin
    std::vector<int> fallback = data_bin_assignment(kp);
    double fallback_l = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double d = kp.pairs[i].g - kp.pairs[i].f;
        fallback_l += d * d;
    }
    if (!find_feasible_system(kp, fallback, margin))
        throw std::logic_error("candidate_search: data-bin assignment infeasible");

    // best-first search over partial assignments; the priority is the exact
    // partial score plus the sum of per-pair minima still to be assigned,
    // a lower bound, so the first feasible complete node popped is optimal
    double tail_min = 0.0;
    std::vector<double> tail(m + 1, 0.0);
    for (std::size_t i = m; i-- > 0;) {
        tail_min += lists[i].front().score;
        tail[i] = tail_min;
    }

    struct Node {
        double bound;
        std::vector<int> bins;
        bool operator>(const Node& o) const { return bound > o.bound; }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> pq;
    pq.push({tail[0], {}});
    std::size_t pops = 0;
    while (!pq.empty() && pops < cfg.node_cap) {
        Node nd = std::move(const_cast<Node&>(pq.top()));
        pq.pop();
        ++pops;
        if (nd.bound > fallback_l)
            break;  // nothing left can beat the guaranteed fallback
        std::size_t depth = nd.bins.size();
        if (depth == m) {
            if (find_feasible_system(kp, nd.bins, margin))
                return {nd.bins, nd.bound, true};
            continue;
        }
        for (const Scored& s : lists[depth]) {
            Node child;
            child.bound = nd.bound - tail[depth] + s.score + tail[depth + 1];
            child.bins = nd.bins;
            child.bins.push_back(s.bin);
            pq.push(std::move(child));
        }
    }
    return {fallback, fallback_l, false};
}

std::optional<std::vector<double>> feasibility_solve(const std::vector<int>& bins,
                                                     const CoordSlice& slice,
                                                     const GridSpec& grid,
                                                     const SolverConfig& cfg)
{
    KnProblem kp = build_kn(slice, grid);
    if (bins.size() != kp.pairs.size())
        throw std::invalid_argument("feasibility_solve: assignment length mismatch");
    for (int b : bins)
        if (b < 1 || b > grid.bin_count())
            throw std::out_of_range("feasibility_solve: bin index out of range");
    return solve_assignment(kp, bins, cfg, /*refine=*/false);
}

StepRegularizer learn_discrete(const TrainingSet& ts, const GridSpec& grid,
                               const SolverConfig& cfg, LearnReport* report)
{
    check_validated(ts, grid);
    const std::size_t dim = ts.front().clean.size();
    std::vector<std::vector<double>> coeffs(dim);
    if (report)
        *report = LearnReport{};
    for (std::size_t gamma = 0; gamma < dim; ++gamma) {
        CoordSlice slice = slice_at(ts, gamma);
        KnProblem kp = build_kn(slice, grid);
        SearchResult sr = candidate_search(slice, grid, cfg);
        auto x = solve_assignment(kp, sr.bins, cfg, cfg.refine);
        if (!x)
            throw std::logic_error("learn_discrete: searched assignment infeasible");
        coeffs[gamma] = std::move(*x);
        if (report) {
            report->kn.push_back(kp.eval(coeffs[gamma]));
            if (!sr.optimal) {
                report->converged = false;
                report->warnings.push_back("coordinate " + std::to_string(gamma) +
                                           ": search budget exhausted, fallback used");
            }
        }
    }
    return StepRegularizer(grid, std::move(coeffs));
}

StepRegularizer learn_direct(const TrainingSet& ts, const GridSpec& grid,
                             const SolverConfig& cfg, LearnReport* report)
{
    check_validated(ts, grid);
    const std::size_t dim = ts.front().clean.size();
    const int bins = grid.bin_count();
    std::vector<std::vector<double>> coeffs(dim);
    if (report)
        *report = LearnReport{};
    CounterRng rng = CounterRng::from_seed(cfg.seed);

    for (std::size_t gamma = 0; gamma < dim; ++gamma) {
        CoordSlice slice = slice_at(ts, gamma);
        KnProblem kp = build_kn(slice, grid);

        double spread = 0.0;
        for (const KnPair& pr : kp.pairs)
            spread = std::max(spread, pr.d);
        spread = std::max(spread, 1e-3);

        auto descend = [&](std::vector<double> x) {
            x = project_quasiconvex(x);
            std::vector<double> best = x;
            double best_v = kp.eval(x);
            for (int it = 0; it < cfg.max_iters; ++it) {
                std::vector<double> g = kp.subgradient(x);
                double gn = std::sqrt(sq_dist(g, std::vector<double>(g.size(), 0.0)));
                if (gn < 1e-14)
                    break;
                double eta = cfg.step0 * spread / (1.0 + it / 25.0) / gn;
                for (std::size_t j = 0; j < x.size(); ++j)
                    x[j] -= eta * g[j];
                x = project_quasiconvex(x);
                double v = kp.eval(x);
                if (v < best_v) {
                    best_v = v;
                    best = x;
                }
            }
            return best;
        };

        std::vector<std::vector<double>> starts;
        starts.emplace_back(bins, 0.0);
        // warm start from the discrete route's solution; kept as a finalist
        // because it breaks K_n ties toward the better training objective
        std::optional<std::vector<double>> discrete_x;
        {
            SearchResult sr = candidate_search(slice, grid, cfg);
            if (auto x = solve_assignment(kp, sr.bins, cfg, true)) {
                discrete_x = *x;
                starts.push_back(std::move(*x));
            }
        }
        CounterRng coord_rng = rng.split(gamma);
        for (int r = 0; r < cfg.restarts; ++r) {
            std::vector<double> x(static_cast<std::size_t>(bins));
            for (double& v : x)
                v = coord_rng.next_range(0.0, 2.0 * spread);
            starts.push_back(std::move(x));
        }

        std::vector<double> best;
        double best_v = std::numeric_limits<double>::infinity();
        for (auto& s : starts) {
            std::vector<double> x = descend(std::move(s));
            double v = kp.eval(x);
            if (v < best_v) {
                best_v = v;
                best = std::move(x);
            }
        }

        // snap to the strict interior of the winning assignment's polytope so
        // the denoiser's tie-breaking cannot drift off the intended bins
        std::vector<int> w = kp.winners(best);
        if (auto snapped = solve_assignment(kp, w, cfg, true)) {
            double v = kp.eval(*snapped);
            if (v <= best_v + 1e-9) {
                best = std::move(*snapped);
                best_v = v;
            }
        }
        if (!is_quasiconvex(best))
            valley_clip(best, argmin_index(best) + 1);

        // distinct assignments can tie in K_n while differing in the actual
        // training objective; break such ties toward the better objective
        if (discrete_x) {
            double v = kp.eval(*discrete_x);
            if (v <= best_v + 1e-9 &&
                coord_objective(kp, *discrete_x) < coord_objective(kp, best)) {
                best = std::move(*discrete_x);
                best_v = v;
            }
        }

        // never worse than the zero regularizer on the training data
        std::vector<double> zero(static_cast<std::size_t>(bins), 0.0);
        if (coord_objective(kp, best) > coord_objective(kp, zero)) {
            if (report) {
                report->converged = false;
                report->warnings.push_back("coordinate " + std::to_string(gamma) +
                                           ": descent worse than zero, kept zero");
            }
            best = zero;
            best_v = kp.eval(zero);
        }
        if (report)
            report->kn.push_back(best_v);
        coeffs[gamma] = std::move(best);
    }
    return StepRegularizer(grid, std::move(coeffs));
}

std::vector<std::pair<int, double>> resolution_sweep(const TrainingSet& ts, int m1,
                                                     int m2, int n_max,
                                                     const SolverConfig& cfg)
{
    std::vector<std::pair<int, double>> out;
    for (int n = 1; n <= n_max; ++n) {
        GridSpec grid(m1, m2, n);
        StepRegularizer reg = learn_discrete(ts, grid, cfg);
        out.emplace_back(n, objective_I(reg, ts));
    }
    return out;
}

}  // namespace qcreg
