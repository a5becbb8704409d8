#include "lgm/theorem_a.hpp"

#include <cmath>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

int total_degree(const std::vector<WilsonLoop>& loops)
{
    int n = 0;
    for (const auto& w : loops)
        n += w.degree();
    return n;
}

std::vector<WilsonLoop> without(const std::vector<WilsonLoop>& loops, std::size_t a, std::size_t b)
{
    std::vector<WilsonLoop> rest;
    for (std::size_t k = 0; k < loops.size(); ++k)
        if (k != a && k != b)
            rest.push_back(loops[k]);
    return rest;
}

LoopSum product_sum(const RepPtr& rep, const std::vector<WilsonLoop>& loops)
{
    LoopSum s(rep);
    s.add(1.0, loops);
    return s;
}

void require_common_rep(const std::vector<WilsonLoop>& loops)
{
    if (loops.empty())
        throw DomainError("verify_theorem_a: no loops");
    for (const auto& w : loops)
        if (!(w.rep()->spec == loops.front().rep()->spec))
            throw DomainError("verify_theorem_a: loops must share one representation");
}

} // namespace

LoopSum merge_twist_terms(const std::vector<WilsonLoop>& loops, Expansion how)
{
    require_common_rep(loops);
    const RepPtr& rep = loops.front().rep();
    LoopSum out(rep);
    for (std::size_t r = 0; r < loops.size(); ++r)
        for (std::size_t s = r + 1; s < loops.size(); ++s)
            out += 2.0 * (total_merge(loops[r], loops[s], how) * product_sum(rep, without(loops, r, s)));
    for (std::size_t r = 0; r < loops.size(); ++r)
        out += total_twist(loops[r], how) * product_sum(rep, without(loops, r, r));
    return out;
}

LoopSum laplacian_of_product(const std::vector<WilsonLoop>& loops, Expansion how)
{
    require_common_rep(loops);
    const RepPtr& rep = loops.front().rep();
    LoopSum out(rep);
    out.add(rep->lambda * total_degree(loops), loops);
    out += merge_twist_terms(loops, how);
    return out;
}

std::vector<WilsonLoop> hermitized(const std::vector<WilsonLoop>& plaquettes)
{
    std::vector<WilsonLoop> out;
    for (const auto& p : plaquettes) {
        if (p.degree() != 1)
            throw DomainError("plaquettes must be linear loops");
        const auto& f = p.factors().front();
        out.push_back(p.scaled(0.5));
        // conj tr(c g^s) = tr(c* g^{-s})
        out.emplace_back(p.rep(), std::vector<LoopFactor>{{f.coeff.adjoint(), -f.sign}},
                         0.5 * std::conj(p.scale()));
    }
    return out;
}

bool TheoremAReport::passed() const
{
    const bool main = exact ? residual <= tolerance : z_score <= tolerance;
    const bool haar = !haar_residual || *haar_residual <= *haar_tolerance;
    return main && haar;
}

TheoremAReport verify_theorem_a(const std::vector<WilsonLoop>& loops, const MeasureSpec& measure,
                                const TheoremAOptions& opts)
{
    require_common_rep(loops);
    measure.validate();
    const RepPtr& rep = loops.front().rep();
    const double lambda_n = rep->lambda * total_degree(loops);
    const LoopSum mt = merge_twist_terms(loops, opts.expansion);

    TheoremAReport rep_out;
    rep_out.kind = measure.kind;

    switch (measure.kind) {
    case MeasureSpec::Kind::Haar: {
        MomentEngine engine(rep, opts.budget);
        rep_out.lhs = lambda_n * engine.expect(loops, measure);
        rep_out.rhs = -engine.expect(mt, measure);
        rep_out.residual = std::abs(rep_out.lhs - rep_out.rhs);
        rep_out.tolerance = 1e-9 * (1.0 + std::abs(rep_out.lhs));
        return rep_out;
    }
    case MeasureSpec::Kind::Brownian: {
        const double h = opts.fd_step;
        if (!(h > 0.0) || h >= measure.t)
            throw DomainError("finite-difference step must lie in (0, t)");
        MomentEngine engine(rep, opts.budget);
        const auto at = [&](double t) { return engine.expect(loops, MeasureSpec::brownian(t)); };
        rep_out.lhs = (at(measure.t + h) - at(measure.t - h)) / (2.0 * h);
        rep_out.rhs = 0.5 * (lambda_n * at(measure.t) + engine.expect(mt, measure));
        rep_out.residual = std::abs(rep_out.lhs - rep_out.rhs);
        rep_out.tolerance = 1e-6;
        return rep_out;
    }
    case MeasureSpec::Kind::Wilson:
        break;
    }

    // Wilson: self-normalized importance sampling over Haar draws, both sides on
    // the same samples.
    rep_out.exact = false;
    rep_out.tolerance = 3.0;
    if (opts.mc.samples < 100)
        throw DomainError("Wilson check needs at least 100 samples");
    const auto q = hermitized(measure.plaquettes);
    LoopSum action_terms(rep);
    for (const auto& w : q)
        action_terms.add(measure.beta * rep->lambda, {w});
    for (const auto& a : q)
        for (const auto& b : q)
            action_terms += (measure.beta * measure.beta) * merge_at(a, 1, b, 1, opts.expansion);

    const bool weighted = measure.beta != 0.0;
    MeasureSampler sampler(rep, MeasureSpec::haar(), opts.mc);
    std::vector<cplx> lhs_v, rhs_v, diff_v;
    std::vector<double> logw;
    const auto n = static_cast<std::size_t>(opts.mc.samples);
    lhs_v.reserve(n);
    rhs_v.reserve(n);
    diff_v.reserve(n);
    double imag = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        const GroupPoint p(sampler.next());
        cplx f = 1.0;
        for (const auto& w : loops)
            f *= w.evaluate(p);
        const cplx l = lambda_n * f;
        const cplx r = -mt.evaluate(p) + f * action_terms.evaluate(p);
        lhs_v.push_back(l);
        rhs_v.push_back(r);
        diff_v.push_back(l - r);
        if (weighted) {
            double im = 0.0;
            logw.push_back(wilson_action(measure, p, &im));
            imag = std::max(imag, im);
        }
    }
    const auto lhs = weighted_estimate(lhs_v, logw);
    const auto rhs = weighted_estimate(rhs_v, logw);
    const auto diff = weighted_estimate(diff_v, logw);
    rep_out.lhs = lhs.value;
    rep_out.rhs = rhs.value;
    rep_out.residual = std::abs(diff.value);
    rep_out.stderr_ = diff.stderr_;
    rep_out.z_score = diff.stderr_ > 0.0 ? rep_out.residual / diff.stderr_ : (rep_out.residual == 0.0 ? 0.0 : INFINITY);
    rep_out.samples = diff.samples;
    rep_out.effective_samples = diff.effective_samples;
    rep_out.discarded_imag = imag;

    if (!weighted) {
        auto exact = verify_theorem_a(loops, MeasureSpec::haar(), opts);
        rep_out.haar_residual = exact.residual;
        rep_out.haar_tolerance = exact.tolerance;
    }
    return rep_out;
}

} // namespace lgm
