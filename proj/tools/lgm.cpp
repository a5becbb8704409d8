// lgm: command-line front end for the loop/moment library.

#include <cstdint>
#include <functional>
#include <iomanip>
#include <map>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lgm/errors.hpp"
#include "lgm/json_io.hpp"
#include "lgm/lie_catalog.hpp"
#include "lgm/moments.hpp"
#include "lgm/sampling.hpp"
#include "lgm/theorem_a.hpp"

using namespace lgm;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::optional<double> tol;
    std::size_t budget = default_budget;
    std::string out = "json";
    bool quiet = false;
};

class UsageError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "usage"; }
};

struct GroupArgs {
    std::string family;
    std::optional<int> n;

    GroupSpec spec() const
    {
        GroupSpec s;
        s.family = parse_family(family);
        if (n)
            s.n = *n;
        else if (s.family == Family::G2)
            s.n = 7;
        else if (s.family == Family::U1Power)
            s.n = 1;
        else
            throw UsageError("--n is required for family " + family);
        s.validate();
        return s;
    }
};

void add_group_options(CLI::App* cmd, GroupArgs& g)
{
    cmd->add_option("--family", g.family, "so, sp, u, su, g2 or u1")->required();
    cmd->add_option("--n", g.n, "size parameter (exponent for u1)");
}

std::pair<int, int> parse_pattern(const std::string& s)
{
    const auto comma = s.find(',');
    try {
        if (comma == std::string::npos)
            return {std::stoi(s), 0};
        return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
    } catch (const std::exception&) {
        throw UsageError("--tensor expects n,n' (got '" + s + "')");
    }
}

// haar | brownian:t=1.5 | wilson:beta=0.1
MeasureSpec parse_measure(const std::string& text, const std::string& plaquettes_file)
{
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::map<std::string, double> kv;
    if (colon != std::string::npos) {
        std::stringstream ss(text.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw UsageError("measure parameter '" + item + "' is not key=value");
            try {
                kv[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
            } catch (const std::exception&) {
                throw UsageError("measure parameter '" + item + "' has a non-numeric value");
            }
        }
    }
    auto take = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end())
            throw UsageError("measure '" + kind + "' needs " + key + "=...");
        const double v = it->second;
        kv.erase(it);
        return v;
    };
    MeasureSpec m;
    if (kind == "haar") {
    } else if (kind == "brownian") {
        m = MeasureSpec::brownian(take("t"));
    } else if (kind == "wilson") {
        const double beta = take("beta");
        if (plaquettes_file.empty())
            throw UsageError("the wilson measure needs --plaquettes");
        m = MeasureSpec::wilson(beta, loop_product_from_json(read_json_file(plaquettes_file)));
    } else {
        throw UsageError("unknown measure '" + kind + "' (expected haar, brownian:t=..., wilson:beta=...)");
    }
    if (!kv.empty())
        throw UsageError("unknown measure parameter '" + kv.begin()->first + "'");
    return m;
}

json measure_json(const MeasureSpec& m)
{
    switch (m.kind) {
    case MeasureSpec::Kind::Haar:
        return {{"kind", "haar"}};
    case MeasureSpec::Kind::Brownian:
        return {{"kind", "brownian"}, {"t", m.t}};
    case MeasureSpec::Kind::Wilson:
        return {{"kind", "wilson"}, {"beta", m.beta}, {"plaquettes", m.plaquettes.size()}};
    }
    return nullptr;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

std::string fmt(cplx v)
{
    return fmt(v.real()) + (v.imag() < 0 ? " - " : " + ") + fmt(std::abs(v.imag())) + "i";
}

class Emitter {
public:
    explicit Emitter(const Globals& g) : g_(g) {}

    // Emits one document. `text` renders the human-readable form.
    void doc(json config, json result, const std::function<void(std::ostream&)>& text)
    {
        if (g_.out == "json") {
            std::cout << json{{"config", config}, {"result", result}}.dump(2) << "\n";
        } else if (g_.out == "jsonl") {
            std::cout << json{{"config", config}, {"result", result}}.dump() << "\n";
        } else {
            text(std::cout);
        }
    }

    void line(const json& j) { std::cout << j.dump() << "\n"; }

private:
    const Globals& g_;
};

json base_config(const Globals& g, const std::string& command)
{
    json c = {{"command", command}, {"seed", g.seed}, {"budget", g.budget}, {"out", g.out}, {"quiet", g.quiet}};
    c["tol"] = g.tol ? json(*g.tol) : json(nullptr);
    return c;
}

// Moment operator as a tensor with axes (I, J), each multi-index split into slots.
Tensor moment_tensor(const MomentOperator& op)
{
    const auto d = static_cast<std::size_t>(op.rep()->dim);
    const auto k = static_cast<std::size_t>(op.n() + op.n_dual());
    return op.matrix().reshaped(std::vector<std::size_t>(2 * k, d));
}

int run_group_info(const Globals& g, const GroupArgs& ga)
{
    const auto spec = ga.spec();
    const auto rep = make_rep(spec);
    const double residual = max_abs_diff(split_casimir(*rep), closed_form_completeness(spec));
    const double tol = g.tol.value_or(1e-12);
    json config = base_config(g, "group info");
    config["group"] = group_spec_to_json(spec);
    json result = {{"group", spec.name()},
                   {"dim", rep->dim},
                   {"generators", rep->algebra_dim()},
                   {"lambda", casimir_eigenvalue(spec)},
                   {"lambda_from_generators", rep->lambda},
                   {"kappa_scale", rep->kappa_scale},
                   {"completeness_residual", residual},
                   {"completeness_ok", residual <= tol}};
    Emitter(g).doc(config, result, [&](std::ostream& os) {
        os << spec.name() << "\n"
           << "  dim                    " << rep->dim << "\n"
           << "  generators             " << rep->algebra_dim() << "\n"
           << "  lambda                 " << fmt(casimir_eigenvalue(spec)) << "\n"
           << "  lambda (generators)    " << fmt(rep->lambda) << "\n"
           << "  completeness residual  " << fmt(residual) << "\n";
    });
    return 0;
}

int run_moment(const Globals& g, const GroupArgs& ga, const std::string& tensor, const std::string& measure_text)
{
    const auto spec = ga.spec();
    const auto [n, nd] = parse_pattern(tensor);
    const auto measure = parse_measure(measure_text, "");
    if (measure.kind == MeasureSpec::Kind::Wilson)
        throw UsageError("moment supports haar and brownian measures only");
    const auto rep = make_rep(spec);
    const auto spectrum = std::make_shared<const CasimirSpectrum>(rep, n, nd, g.budget);
    const auto op = measure.kind == MeasureSpec::Kind::Haar ? MomentOperator::haar(spectrum)
                                                            : MomentOperator::brownian(spectrum, measure.t);
    json config = base_config(g, "moment");
    config["group"] = group_spec_to_json(spec);
    config["tensor"] = {n, nd};
    config["measure"] = measure_json(measure);
    const Tensor t = moment_tensor(op);
    json result = {{"n", n},
                   {"n_dual", nd},
                   {"dim", op.dim()},
                   {"rank", op.rank()},
                   {"spectrum", spectrum_to_json(op.spectrum())},
                   {"axes", "(i_1..i_n, i'_1..i'_n', j_1..j_n, j'_1..j'_n')"},
                   {"tensor", tensor_to_json(t)}};
    Emitter(g).doc(config, result, [&](std::ostream& os) {
        os << spec.name() << " (" << n << "," << nd << ") " << measure.describe() << "\n"
           << "  D = " << op.dim() << ", rank " << op.rank() << "\n  spectrum:";
        for (const auto& e : op.spectrum())
            os << " " << fmt(e.value) << " x" << e.multiplicity;
        os << "\n";
        if (!g.quiet) {
            const auto j = tensor_to_json(t);
            for (const auto& e : j["entries"]) {
                os << "  " << e["idx"].dump() << "  " << fmt(cplx{e["re"].get<double>(), e["im"].get<double>()})
                   << "\n";
            }
        }
    });
    return 0;
}

int run_weingarten(const Globals& g, const GroupArgs& ga, std::optional<int> order,
                   const std::string& tensor, const std::string& source_key)
{
    const auto spec = ga.spec();
    int n = 0, nd = 0;
    if (order) {
        n = nd = *order;
    } else if (!tensor.empty()) {
        std::tie(n, nd) = parse_pattern(tensor);
    } else {
        throw UsageError("weingarten needs --order or --tensor");
    }
    const auto rep = make_rep(spec);
    const auto source = parse_spanning_source(source_key);
    const auto wm = weingarten(spanning_set(rep, n, nd, source, g.budget));
    json config = base_config(g, "weingarten");
    config["group"] = group_spec_to_json(spec);
    config["tensor"] = {n, nd};
    config["source"] = spanning_source_key(source);
    json result = {{"labels", wm.spanning.labels},
                   {"gram", matrix_to_json(wm.gram)},
                   {"wg", matrix_to_json(wm.wg)},
                   {"pseudoinverse_residuals", wm.pseudoinverse_residuals()}};
    try {
        const auto haar = haar_moment(rep, n, nd, g.budget);
        result["projector_vs_haar"] = (wm.projector() - haar.dense()).cwiseAbs().maxCoeff();
    } catch (const NumericalGuardError&) {
        result["projector_vs_haar"] = nullptr;
    }
    Emitter(g).doc(config, result, [&](std::ostream& os) {
        os << spec.name() << " (" << n << "," << nd << ") source " << spanning_source_key(source) << "\n";
        for (std::size_t a = 0; a < wm.spanning.labels.size(); ++a) {
            os << "  " << std::setw(12) << wm.spanning.labels[a] << "  gram";
            for (Eigen::Index b = 0; b < wm.gram.cols(); ++b)
                os << " " << fmt(wm.gram(static_cast<Eigen::Index>(a), b).real());
            os << "  wg";
            for (Eigen::Index b = 0; b < wm.wg.cols(); ++b)
                os << " " << fmt(wm.wg(static_cast<Eigen::Index>(a), b).real());
            os << "\n";
        }
    });
    return 0;
}

int run_expect(const Globals& g, const std::string& loops_file, const std::string& measure_text,
               const std::string& plaq_file, long samples, bool mc, bool sum, int steps)
{
    const json doc = read_json_file(loops_file);
    LoopSum f;
    if (sum) {
        f = loop_sum_from_json(doc);
    } else {
        const auto loops = loop_product_from_json(doc);
        f = LoopSum(loops.front().rep());
        f.add(1.0, loops);
    }
    if (!f.rep())
        throw UsageError("no loops in " + loops_file);
    const auto measure = parse_measure(measure_text, plaq_file);
    json config = base_config(g, "expect");
    config["loops"] = loops_file;
    config["measure"] = measure_json(measure);
    config["sum"] = sum;
    json result;
    std::function<void(std::ostream&)> text;
    if (measure.kind == MeasureSpec::Kind::Wilson || mc) {
        MCOptions opts;
        opts.samples = samples;
        opts.rng = {g.seed, 0};
        opts.brownian_steps = steps;
        config["samples"] = samples;
        config["brownian_steps"] = steps;
        const auto est = mc_expect(f, measure, opts);
        result = {{"value", complex_to_json(est.value)},
                  {"stderr", est.stderr_},
                  {"samples", est.samples},
                  {"seed", g.seed},
                  {"effective_samples", est.effective_samples}};
        if (measure.kind == MeasureSpec::Kind::Wilson)
            result["discarded_imag"] = est.discarded_imag;
        text = [est](std::ostream& os) {
            os << fmt(est.value) << " +- " << fmt(est.stderr_) << " (" << est.samples << " samples)\n";
        };
    } else {
        MomentEngine engine(f.rep(), g.budget);
        const cplx v = engine.expect(f, measure);
        result = {{"value", complex_to_json(v)}};
        text = [v](std::ostream& os) { os << fmt(v) << "\n"; };
    }
    Emitter(g).doc(config, result, text);
    return 0;
}

int run_sample(const Globals& g, const GroupArgs& ga, long count)
{
    if (count < 1)
        throw UsageError("--count must be positive");
    const auto spec = ga.spec();
    const auto rep = make_rep(spec);
    Rng rng({g.seed, 0});
    json config = base_config(g, "sample");
    config["group"] = group_spec_to_json(spec);
    config["count"] = count;
    Emitter em(g);
    if (g.out == "jsonl") {
        em.line({{"config", config}});
        for (long k = 0; k < count; ++k) {
            const Matrix m = haar_sample(*rep, rng);
            em.line({{"index", k}, {"g", matrix_to_json(m)}, {"residual", group_residual(*rep, m)}});
        }
        return 0;
    }
    json list = json::array();
    std::vector<Matrix> ms;
    for (long k = 0; k < count; ++k) {
        ms.push_back(haar_sample(*rep, rng));
        list.push_back({{"g", matrix_to_json(ms.back())}, {"residual", group_residual(*rep, ms.back())}});
    }
    em.doc(config, {{"samples", list}}, [&](std::ostream& os) {
        for (const auto& m : ms) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                for (Eigen::Index k = 0; k < m.cols(); ++k)
                    os << (k ? "  " : "") << fmt(m(i, k));
                os << "\n";
            }
            os << "\n";
        }
    });
    return 0;
}

int run_brownian_path(const Globals& g, const GroupArgs& ga, double t, int steps, long count)
{
    if (count < 1)
        throw UsageError("--count must be positive");
    const auto spec = ga.spec();
    const auto rep = make_rep(spec);
    const BrownianPathSpec ps{t, steps};
    ps.validate();
    Rng rng({g.seed, 0});
    json config = base_config(g, "brownian-path");
    config["group"] = group_spec_to_json(spec);
    config["t"] = t;
    config["steps"] = steps;
    config["count"] = count;
    Emitter em(g);
    std::vector<Matrix> ms;
    json list = json::array();
    if (g.out == "jsonl")
        em.line({{"config", config}});
    for (long k = 0; k < count; ++k) {
        Matrix m = brownian_path(*rep, ps, rng);
        json rec = {{"index", k}, {"g", matrix_to_json(m)}, {"residual", group_residual(*rep, m)}};
        if (g.out == "jsonl")
            em.line(rec);
        else
            list.push_back(rec);
        ms.push_back(std::move(m));
    }
    if (g.out == "jsonl")
        return 0;
    em.doc(config, {{"paths", list}}, [&](std::ostream& os) {
        for (const auto& m : ms) {
            for (Eigen::Index i = 0; i < m.rows(); ++i) {
                for (Eigen::Index k = 0; k < m.cols(); ++k)
                    os << (k ? "  " : "") << fmt(m(i, k));
                os << "\n";
            }
            os << "\n";
        }
    });
    return 0;
}

int run_verify(const Globals& g, const std::string& loops_file, const std::string& measure_text,
               const std::string& plaq_file, long samples, const std::string& expansion, double fd_step)
{
    const auto loops = loop_product_from_json(read_json_file(loops_file));
    const auto measure = parse_measure(measure_text, plaq_file);
    TheoremAOptions opts;
    opts.budget = g.budget;
    opts.fd_step = fd_step;
    opts.mc.samples = samples;
    opts.mc.rng = {g.seed, 0};
    if (expansion == "closed")
        opts.expansion = Expansion::ClosedForm;
    else if (expansion == "generator")
        opts.expansion = Expansion::GeneratorSum;
    else
        throw UsageError("--expansion must be closed or generator");
    auto report = verify_theorem_a(loops, measure, opts);
    if (g.tol)
        report.tolerance = *g.tol;
    json config = base_config(g, "verify theorem-a");
    config["loops"] = loops_file;
    config["measure"] = measure_json(measure);
    config["expansion"] = expansion;
    if (measure.kind == MeasureSpec::Kind::Brownian)
        config["fd_step"] = fd_step;
    if (measure.kind == MeasureSpec::Kind::Wilson)
        config["samples"] = samples;
    json result = {{"lhs", complex_to_json(report.lhs)},
                   {"rhs", complex_to_json(report.rhs)},
                   {"residual", report.residual},
                   {"tolerance", report.tolerance},
                   {"exact", report.exact},
                   {"passed", report.passed()}};
    if (!report.exact) {
        result["stderr"] = report.stderr_;
        result["z_score"] = report.z_score;
        result["samples"] = report.samples;
        result["seed"] = g.seed;
        result["effective_samples"] = report.effective_samples;
        result["discarded_imag"] = report.discarded_imag;
    }
    if (report.haar_residual)
        result["haar_residual"] = *report.haar_residual;
    Emitter(g).doc(config, result, [&](std::ostream& os) {
        os << "lhs      " << fmt(report.lhs) << "\n"
           << "rhs      " << fmt(report.rhs) << "\n"
           << "residual " << fmt(report.residual) << "\n";
        if (!report.exact)
            os << "z-score  " << fmt(report.z_score) << "\n";
        os << (report.passed() ? "PASS" : "FAIL") << "\n";
    });
    return report.passed() ? 0 : 1;
}

void emit_error(const Globals& g, const std::string& kind, const std::string& detail)
{
    if (g.out == "json" || g.out == "jsonl")
        std::cout << json{{"error", {{"kind", kind}, {"detail", detail}}}}.dump(g.out == "json" ? 2 : -1) << "\n";
    else
        std::cerr << "lgm: " << kind << " error: " << detail << "\n";
}

} // namespace

int main(int argc, char** argv)
{
    Globals g;
    CLI::App app{"Wilson-loop moments on compact Lie groups"};
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--tol", g.tol, "pass/fail tolerance override");
    app.add_option("--budget", g.budget, "largest tensor dimension d^(n+n')")->capture_default_str();
    app.add_option("--out", g.out, "json, jsonl or text")
        ->check(CLI::IsMember({"json", "jsonl", "text"}))
        ->capture_default_str();
    app.add_flag("--quiet", g.quiet, "suppress bulky text output");
    app.fallthrough();

    auto* group = app.add_subcommand("group", "group catalog")->require_subcommand(1);
    auto* info = group->add_subcommand("info", "dimension, Casimir eigenvalue and completeness check");
    GroupArgs info_g;
    add_group_options(info, info_g);
    bool json_flag = false;
    info->add_flag("--json", json_flag, "same as --out json");

    auto* moment = app.add_subcommand("moment", "moment operator on a tensor representation");
    GroupArgs mom_g;
    std::string mom_tensor, mom_measure = "haar";
    add_group_options(moment, mom_g);
    moment->add_option("--tensor", mom_tensor, "n,n'")->required();
    moment->add_option("--measure", mom_measure, "haar or brownian:t=T")->capture_default_str();

    auto* wg = app.add_subcommand("weingarten", "Gram matrix and Weingarten map of a spanning set");
    GroupArgs wg_g;
    std::optional<int> wg_order;
    std::string wg_tensor, wg_source = "nullspace";
    add_group_options(wg, wg_g);
    wg->add_option("--order", wg_order, "n = n'");
    wg->add_option("--tensor", wg_tensor, "n,n'");
    wg->add_option("--source", wg_source, "permutations, pairings, g2u or nullspace")->capture_default_str();

    auto* ex = app.add_subcommand("expect", "expectation of a product of loops");
    std::string ex_loops, ex_measure = "haar", ex_plaq;
    long ex_samples = 100000;
    int ex_steps = 200;
    bool ex_mc = false, ex_sum = false;
    ex->add_option("--loops", ex_loops, "loop file")->required();
    ex->add_option("--measure", ex_measure, "haar, brownian:t=T or wilson:beta=B")->capture_default_str();
    ex->add_option("--plaquettes", ex_plaq, "plaquette loop file (wilson)");
    ex->add_option("--samples", ex_samples, "Monte Carlo samples")->capture_default_str();
    ex->add_option("--steps", ex_steps, "steps per Brownian path (Monte Carlo)")->capture_default_str();
    ex->add_flag("--mc", ex_mc, "Monte Carlo even when an exact value is available");
    ex->add_flag("--sum", ex_sum, "the file holds a loop sum rather than a product");

    auto* sample = app.add_subcommand("sample", "Haar samples");
    GroupArgs smp_g;
    long smp_count = 1;
    add_group_options(sample, smp_g);
    sample->add_option("--count", smp_count, "number of samples")->capture_default_str();

    auto* bp = app.add_subcommand("brownian-path", "endpoints of Brownian paths");
    GroupArgs bp_g;
    double bp_t = 1.0;
    int bp_steps = 100;
    long bp_count = 1;
    add_group_options(bp, bp_g);
    bp->add_option("--t", bp_t, "total time")->capture_default_str();
    bp->add_option("--steps", bp_steps, "number of steps")->capture_default_str();
    bp->add_option("--count", bp_count, "number of paths")->capture_default_str();

    auto* verify = app.add_subcommand("verify", "identity checks")->require_subcommand(1);
    auto* ta = verify->add_subcommand("theorem-a", "Laplacian identity for loop expectations");
    std::string ta_loops, ta_measure = "haar", ta_plaq, ta_expansion = "closed";
    long ta_samples = 200000;
    double ta_fd = 1e-4;
    ta->add_option("--loops", ta_loops, "loop file")->required();
    ta->add_option("--measure", ta_measure, "haar, brownian:t=T or wilson:beta=B")->capture_default_str();
    ta->add_option("--plaquettes", ta_plaq, "plaquette loop file (wilson)");
    ta->add_option("--samples", ta_samples, "Monte Carlo samples (wilson)")->capture_default_str();
    ta->add_option("--expansion", ta_expansion, "closed or generator")->capture_default_str();
    ta->add_option("--fd-step", ta_fd, "finite-difference step (brownian)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error(g, "usage", e.what());
        return 2;
    }
    if (json_flag)
        g.out = "json";

    try {
        if (*info)
            return run_group_info(g, info_g);
        if (*moment)
            return run_moment(g, mom_g, mom_tensor, mom_measure);
        if (*wg)
            return run_weingarten(g, wg_g, wg_order, wg_tensor, wg_source);
        if (*ex)
            return run_expect(g, ex_loops, ex_measure, ex_plaq, ex_samples, ex_mc, ex_sum, ex_steps);
        if (*sample)
            return run_sample(g, smp_g, smp_count);
        if (*bp)
            return run_brownian_path(g, bp_g, bp_t, bp_steps, bp_count);
        if (*ta)
            return run_verify(g, ta_loops, ta_measure, ta_plaq, ta_samples, ta_expansion, ta_fd);
    } catch (const NumericalGuardError& e) {
        emit_error(g, e.kind(), e.what());
        return 1;
    } catch (const Error& e) {
        emit_error(g, e.kind(), e.what());
        return 2;
    } catch (const nlohmann::json::exception& e) {
        emit_error(g, "usage", e.what());
        return 2;
    }
    emit_error(g, "usage", "no command given");
    return 2;
}
