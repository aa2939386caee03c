#include "qcreg/paramlearn.hpp"

#include <cmath>
#include <stdexcept>

namespace qcreg {

namespace {

std::vector<ScalarTerm> terms_at(const std::vector<double>& lambda,
                                 const PenaltyFamily& fam, std::size_t gamma)
{
    if (lambda.size() != fam.term_count())
        throw std::invalid_argument("lambda length does not match penalty family");
    std::vector<ScalarTerm> out;
    for (std::size_t j = 0; j < lambda.size(); ++j) {
        if (lambda[j] < 0.0)
            throw std::invalid_argument("lambda must be non-negative");
        if (lambda[j] == 0.0)
            continue;
        out.push_back({lambda[j] * fam.weights.at(j).at(gamma), fam.p[j]});
    }
    return out;
}

}  // namespace

double f_lambda(double x, const std::vector<double>& lambda, const PenaltyFamily& fam,
                std::size_t gamma)
{
    if (x == 0.0)
        return 0.0;
    double s = (x > 0.0) ? 1.0 : -1.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < fam.term_count(); ++j) {
        if (!(fam.p[j] > 1.0))
            throw std::domain_error("f_lambda requires p > 1; use shrink_multi for p = 1");
        acc += fam.p[j] * lambda.at(j) * fam.weights[j].at(gamma) *
               std::pow(std::fabs(x), fam.p[j] - 1.0);
    }
    return x + s * 0.5 * acc;
}

double invert_f_lambda(double y, const std::vector<double>& lambda,
                       const PenaltyFamily& fam, std::size_t gamma)
{
    std::vector<ScalarTerm> at = terms_at(lambda, fam, gamma);
    // with all lambda_j = 0 the map is the identity
    return at.empty() ? y : shrink_multi(y, at);
}

double objective_I_lambda(const std::vector<double>& lambda, const TrainingSet& ts,
                          const PenaltyFamily& fam)
{
    double acc = 0.0;
    for (const TrainingPair& pr : ts)
        for (std::size_t gamma = 0; gamma < pr.noisy.size(); ++gamma) {
            double r = invert_f_lambda(pr.noisy[gamma], lambda, fam, gamma) -
                       pr.clean[gamma];
            acc += r * r;
        }
    return acc;
}

std::vector<double> gradient_I_lambda(const std::vector<double>& lambda,
                                      const TrainingSet& ts, const PenaltyFamily& fam)
{
    std::vector<double> grad(fam.term_count(), 0.0);
    for (const TrainingPair& pr : ts)
        for (std::size_t gamma = 0; gamma < pr.noisy.size(); ++gamma) {
            double x = invert_f_lambda(pr.noisy[gamma], lambda, fam, gamma);
            if (x == 0.0)
                continue;  // dead zone (or y = 0): locally constant in lambda
            double res = x - pr.clean[gamma];
            double ax = std::fabs(x);
            double s = (x > 0.0) ? 1.0 : -1.0;
            // dF/dx at the solution
            double dfdx = 1.0;
            for (std::size_t j = 0; j < fam.term_count(); ++j)
                dfdx += 0.5 * fam.p[j] * (fam.p[j] - 1.0) * lambda[j] *
                        fam.weights[j][gamma] * std::pow(ax, fam.p[j] - 2.0);
            for (std::size_t j = 0; j < fam.term_count(); ++j) {
                // implicit differentiation: d x / d lambda_j = -(dF/dlambda_j)/(dF/dx)
                double dfdl = 0.5 * fam.p[j] * fam.weights[j][gamma] * s *
                              std::pow(ax, fam.p[j] - 1.0);
                grad[j] += 2.0 * res * (-dfdl / dfdx);
            }
        }
    return grad;
}

LambdaLearnResult learn_lambdas(const TrainingSet& ts, const PenaltyFamily& fam,
                                const LambdaLearnConfig& cfg)
{
    if (fam.term_count() == 0)
        throw std::invalid_argument("learn_lambdas: empty penalty family");
    std::vector<double> lambda(fam.term_count(), 0.0);
    double obj = objective_I_lambda(lambda, ts, fam);
    LambdaLearnResult res;
    res.trajectory.push_back(obj);

    for (int it = 0; it < cfg.max_iters; ++it) {
        std::vector<double> g = gradient_I_lambda(lambda, ts, fam);
        double gn = 0.0;
        for (double v : g)
            gn += v * v;
        if (gn < cfg.tol * cfg.tol)
            break;
        // backtracking projected gradient step
        double step = cfg.step0;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            std::vector<double> trial(lambda.size());
            for (std::size_t j = 0; j < lambda.size(); ++j)
                trial[j] = std::max(0.0, lambda[j] - step * g[j]);
            double tobj = objective_I_lambda(trial, ts, fam);
            if (tobj < obj - 1e-16) {
                lambda = std::move(trial);
                obj = tobj;
                res.trajectory.push_back(obj);
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted)
            break;  // no descent direction left at line-search resolution
    }
    res.lambda = std::move(lambda);
    return res;
}

}  // namespace qcreg
