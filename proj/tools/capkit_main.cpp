// capkit command-line front end.
//
// Exit codes: 0 ok, 1 invalid input / failed validation / failed checks,
// 2 solver did not converge.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "capkit/capacity.hpp"
#include "capkit/content.hpp"
#include "capkit/io.hpp"
#include "capkit/space.hpp"
#include "capkit/verify.hpp"

namespace {

using namespace capkit;

constexpr int kExitInvalid = 1;
constexpr int kExitNoConvergence = 2;

struct Common {
    std::string space_path;
    std::string set_arg;
    std::string out_path;
    std::string beta = "0.5", p = "2", q = "2", lambda = "41";
    std::string tol;
    bool outer_closed = false;
    bool no_triangle = false;
};

Space load_space(const std::string& path, bool skip_triangle) {
    if (path.empty())
        throw Error("--space is required");
    const std::string text = io::read_file(path);
    Space s = io::parse_space(text);
    const ValidationReport rep = validate_metric(s, 1e-12, !(skip_triangle || io::declares_euclidean(text)));
    if (!rep.ok)
        throw Error("invalid space (" + rep.axiom + "): " + rep.message);
    return s;
}

PointSet load_set(const Space& s, const std::string& arg) {
    if (arg.empty())
        throw Error("--set is required");
    // a file path when it exists, otherwise a literal list
    std::FILE* f = std::fopen(arg.c_str(), "rb");
    if (f) {
        std::fclose(f);
        return io::parse_set(s, io::read_file(arg));
    }
    return io::parse_set_arg(s, arg);
}

CapacityParams params_of(const Common& c) {
    CapacityParams prm;
    prm.beta = io::parse_real(c.beta);
    prm.p = io::parse_real(c.p);
    prm.q = io::parse_real(c.q);
    prm.Lambda = io::parse_real(c.lambda);
    prm.outer_closed = c.outer_closed;
    return prm;
}

SolverOptions options_of(const Common& c) {
    SolverOptions opt;
    if (!c.tol.empty())
        opt.tol = io::parse_real(c.tol);
    return opt;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-")
        std::cout << text;
    else
        io::write_file(path, text);
}

void add_param_flags(CLI::App* cmd, Common& c) {
    cmd->add_option("--beta", c.beta, "smoothness beta")->capture_default_str();
    cmd->add_option("--p", c.p, "outer exponent p")->capture_default_str();
    cmd->add_option("--q", c.q, "inner exponent q, 'inf' allowed")->capture_default_str();
}

int run_space_validate(const Common& c) {
    const std::string text = io::read_file(c.space_path);
    const Space s = io::parse_space(text);
    const ValidationReport rep = validate_metric(s, 1e-12, !c.no_triangle);
    if (!rep.ok) {
        std::string who;
        for (std::size_t i = 0; i < rep.witness.size(); ++i)
            who += (i ? "," : "") + s.id(rep.witness[i]);
        std::cout << "invalid: " << rep.axiom << " violated at (" << who << "): " << rep.message << "\n";
        return kExitInvalid;
    }
    const SpaceStats st = estimate_stats(s);
    const ScaleWindow w = scale_window(s);
    std::cout << "ok: " << s.size() << " points, diam " << io::format_real(s.diam()) << "\n";
    std::cout << "c_mu " << io::format_real(st.c_mu) << "\n";
    std::cout << "c_R " << (st.c_R ? io::format_real(*st.c_R) : std::string("absent")) << "\n";
    std::cout << "sigma " << io::format_real(st.sigma) << (st.sigma_degenerate ? " (degenerate)" : "") << "\n";
    std::cout << "scales " << w.n0 << ".." << w.n_max << "\n";
    return 0;
}

struct BuildSpec {
    std::string kind = "grid";
    int dim = 1, level = 4, depth = 3, count = 8;
    double ratio = 1.0 / 3, spacing = 1.0;
    std::string set_out;
};

int run_space_build(const BuildSpec& b, const std::string& out) {
    Space s;
    PointSet e;
    if (b.kind == "grid")
        s = build_grid(b.dim, b.level);
    else if (b.kind == "cantor") {
        CantorSpace cs = build_cantor(b.ratio, b.depth);
        s = std::move(cs.space);
        e = std::move(cs.set);
    } else if (b.kind == "line")
        s = build_line(b.count, b.spacing, 1.0 / b.count);
    else if (b.kind == "two_point")
        s = two_point_space();
    else if (b.kind == "three_chain")
        s = three_chain();
    else
        throw Error("unknown builder " + b.kind);
    emit(out, io::dump_space(s));
    if (!b.set_out.empty()) {
        if (b.kind != "cantor")
            throw Error("--set-out is only meaningful for the cantor builder");
        io::write_file(b.set_out, io::dump_set(s, e));
    }
    return 0;
}

struct OpArgs {
    std::string seq_path, measure_path;
    std::string tail_coeff = "0";
    std::string qdual = "1";
};

int run_op(const std::string& which, const Common& c, const OpArgs& a) {
    const Space s = load_space(c.space_path, c.no_triangle);
    const double beta = io::parse_real(c.beta);
    PointFunction out;
    if (which == "H" || which == "L") {
        if (a.seq_path.empty())
            throw Error("--seq is required");
        const ScaleSequence f = io::parse_sequence(s, io::read_file(a.seq_path));
        out = which == "H" ? potential_H(s, f, beta, io::parse_real(a.tail_coeff)) : potential_L(s, f, beta);
    } else {
        if (a.measure_path.empty())
            throw Error("--measure is required");
        const PointMeasure nu = io::parse_point_values(s, io::read_file(a.measure_path));
        if (which == "riesz")
            out = riesz_I(s, nu, beta);
        else if (which == "maxfrac")
            out = frac_max(s, nu, beta);
        else {
            const HdualValues h = hdual_sequence(s, nu, beta, io::parse_real(a.qdual));
            out.resize(s.size());
            for (std::size_t x = 0; x < s.size(); ++x)
                out[x] = h.point_norm(static_cast<int>(x));
            std::cerr << "norm " << io::format_real(hdual_norm(s, h, io::parse_real(c.p))) << "\n";
        }
    }
    emit(c.out_path, io::dump_point_values(s, out));
    return 0;
}

int run_content(const Common& c, const std::string& d, const std::string& rho, bool greedy) {
    const Space s = load_space(c.space_path, c.no_triangle);
    const PointSet f = load_set(s, c.set_arg);
    ContentParams prm;
    prm.d = io::parse_real(d);
    prm.rho = io::parse_real(rho);
    const Cover cov = greedy ? content_greedy(s, f, prm) : content_exact(s, f, prm);
    std::cout << "content " << io::format_real(cov.total) << (greedy ? " (greedy upper bound)" : "") << "\n";
    if (!c.out_path.empty())
        io::write_file(c.out_path, io::dump_cover(s, cov));
    return 0;
}

int report_certificate(const CapacityCertificate& cert, const Space& s, const std::string& out) {
    std::cout << "value " << io::format_real(cert.value) << "\n";
    std::cout << "dual_value " << io::format_real(cert.dual_value) << "\n";
    std::cout << "gap " << io::format_real(cert.rel_gap) << "\n";
    if (!out.empty())
        io::write_file(out, io::dump_certificate(s, cert));
    if (!cert.converged) {
        std::cerr << "solver did not converge after " << cert.iterations << " iterations\n";
        return kExitNoConvergence;
    }
    return 0;
}

int run_cap(const std::string& which, const Common& c, const std::string& center, const std::string& radius) {
    const Space s = load_space(c.space_path, c.no_triangle);
    const PointSet e = load_set(s, c.set_arg);
    const CapacityParams prm = params_of(c);
    const SolverOptions opt = options_of(c);
    CapacityCertificate cert;
    if (which == "tl")
        cert = cap_tl_primal(s, e, prm, opt);
    else if (which == "tl-dual")
        cert = cap_tl_dual(s, e, prm, opt);
    else if (which == "riesz")
        cert = cap_riesz(s, e, prm.beta, prm.p, opt);
    else {
        if (center.empty() || radius.empty())
            throw Error("relative capacity needs --center and --radius");
        const int ci = s.index_of(center);
        cert = cap_relative(s, e, ci, io::parse_real(radius), prm, opt);
    }
    return report_certificate(cert, s, c.out_path);
}

// Re-validates a stored certificate without solving anything.
int run_cap_check(const Common& c, const std::string& cert_path) {
    const Space s = load_space(c.space_path, c.no_triangle);
    const CapacityCertificate cert = io::parse_certificate(s, io::read_file(cert_path));
    const ResidualReport r = certificate_residual(s, cert);
    std::cout << "kind " << cert.kind << "\n";
    std::cout << "value " << io::format_real(cert.value) << "\n";
    std::cout << "objective " << io::format_real(r.objective) << "\n";
    std::cout << "max_violation " << io::format_real(r.max_violation) << "\n";
    const bool ok = r.max_violation <= 1e-9 && std::abs(r.objective - cert.value) <= 1e-9 * std::max(1.0, cert.value);
    std::cout << (ok ? "certificate ok" : "certificate REJECTED") << "\n";
    return ok ? 0 : kExitInvalid;
}

verify::Instance parse_instance(const std::string& text, const Common& c) {
    // grid:DIM:LEVEL, cantor:RATIO:DEPTH, two_point, three_chain, or a space file via --space
    if (text.empty()) {
        if (c.space_path.empty())
            throw Error("verify check needs --instance or --space");
        Space s = load_space(c.space_path, c.no_triangle);
        PointSet e = c.set_arg.empty() ? PointSet{0} : load_set(s, c.set_arg);
        return verify::Instance::from_space(std::move(s), std::move(e), c.space_path);
    }
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i)
        if (i == text.size() || text[i] == ':') {
            parts.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    auto as_int = [](const std::string& t) { return static_cast<int>(io::parse_real(t)); };
    if (parts[0] == "grid" && parts.size() == 3)
        return verify::Instance::grid(as_int(parts[1]), as_int(parts[2]));
    if (parts[0] == "cantor" && parts.size() == 3)
        return verify::Instance::cantor(io::parse_real(parts[1]), as_int(parts[2]));
    if (parts[0] == "two_point" && parts.size() == 1)
        return verify::Instance::two_point();
    if (parts[0] == "three_chain" && parts.size() == 1)
        return verify::Instance::three_chain();
    throw Error("cannot parse instance '" + text + "' (grid:DIM:LEVEL, cantor:RATIO:DEPTH, two_point, three_chain)");
}

struct VerifyArgs {
    std::string check_id, instance, csv_path;
    unsigned long long seed = 7;
    int jobs = 1;
    int samples = 32;
    bool timings = false;
    bool full_samples = false;
};

int finish_report(const verify::Report& rep, const Common& c, const VerifyArgs& v) {
    emit(c.out_path, verify::report_json(rep, v.timings));
    if (!v.csv_path.empty())
        io::write_file(v.csv_path, verify::report_csv(rep));
    if (!c.out_path.empty() && c.out_path != "-")
        std::cout << rep.results.size() << " checks, " << rep.failures() << " failed\n";
    return rep.failures() == 0 ? 0 : kExitInvalid;
}

verify::CheckConfig config_of(const Common& c, const VerifyArgs& v) {
    verify::CheckConfig cfg;
    cfg.params = params_of(c);
    cfg.seed = v.seed;
    cfg.samples = v.samples;
    cfg.cap_samples = !v.full_samples;
    if (!c.tol.empty())
        cfg.tol = io::parse_real(c.tol);
    return cfg;
}

int run_verify_check(const Common& c, const VerifyArgs& v) {
    if (!verify::is_check_id(v.check_id)) {
        std::string all;
        for (const auto& id : verify::check_ids())
            all += " " + id;
        throw Error("unknown check '" + v.check_id + "'; known:" + all);
    }
    const verify::CheckConfig cfg = config_of(c, v);
    verify::Report rep;
    rep.seed = cfg.seed;
    rep.results.push_back(verify::run_check(v.check_id, parse_instance(v.instance, c), cfg));
    return finish_report(rep, c, v);
}

int run_verify_suite(const Common& c, const VerifyArgs& v) {
    const verify::CheckConfig cfg = config_of(c, v);
    return finish_report(verify::run_suite(verify::default_suite(cfg), cfg, v.jobs), c, v);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"capkit: capacities, potentials and contents on finite metric measure spaces"};
    app.require_subcommand(1);
    Common c;

    auto* space = app.add_subcommand("space", "validate or build spaces");
    space->require_subcommand(1);
    auto* sv = space->add_subcommand("validate", "check the metric axioms and print space constants");
    sv->add_option("file", c.space_path, "space file")->required();
    sv->add_flag("--no-triangle", c.no_triangle, "skip the O(n^3) triangle scan");
    BuildSpec bs;
    auto* sb = space->add_subcommand("build", "write a generated space");
    sb->add_option("kind", bs.kind, "grid | cantor | line | two_point | three_chain")->required();
    sb->add_option("--dim", bs.dim, "grid dimension (1 or 2)");
    sb->add_option("--level", bs.level, "grid level: 2^level points per axis");
    sb->add_option("--ratio", bs.ratio, "cantor ratio");
    sb->add_option("--depth", bs.depth, "cantor depth");
    sb->add_option("--count", bs.count, "line point count");
    sb->add_option("--spacing", bs.spacing, "line spacing");
    sb->add_option("--set-out", bs.set_out, "cantor: write the Cantor set here");
    sb->add_option("-o,--out", c.out_path, "output file (default stdout)");

    OpArgs oa;
    std::string op_which;
    auto* op = app.add_subcommand("op", "evaluate an operator, one value per point");
    op->add_option("operator", op_which, "H | L | riesz | maxfrac | hdual")
        ->required()
        ->check(CLI::IsMember({"H", "L", "riesz", "maxfrac", "hdual"}));
    op->add_option("--space", c.space_path, "space file")->required();
    op->add_option("--seq", oa.seq_path, "scale sequence file (H, L)");
    op->add_option("--measure", oa.measure_path, "point measure file (riesz, maxfrac, hdual)");
    op->add_option("--tail-coeff", oa.tail_coeff, "H: weight of the tail slot");
    op->add_option("--qdual", oa.qdual, "hdual: inner exponent over scales");
    op->add_option("--beta", c.beta, "smoothness beta")->capture_default_str();
    op->add_option("--p", c.p, "hdual: outer exponent for the printed norm");
    op->add_option("-o,--out", c.out_path, "output file (default stdout)");

    std::string d = "0", rho;
    bool greedy = false;
    auto* ct = app.add_subcommand("content", "Hausdorff content of codimension d");
    ct->add_option("--space", c.space_path, "space file")->required();
    ct->add_option("--set", c.set_arg, "set file or literal {a,b}")->required();
    ct->add_option("--d", d, "codimension")->capture_default_str();
    ct->add_option("--rho", rho, "radius restriction")->required();
    ct->add_flag("--greedy", greedy, "greedy upper bound instead of the exact search");
    ct->add_option("-o,--out", c.out_path, "write the cover here");

    std::string cap_which, center, radius, cert_path;
    auto* cap = app.add_subcommand("cap", "capacities with primal/dual certificates");
    cap->add_option("kind", cap_which, "tl | tl-dual | relative | riesz | check")
        ->required()
        ->check(CLI::IsMember({"tl", "tl-dual", "relative", "riesz", "check"}));
    cap->add_option("--space", c.space_path, "space file")->required();
    cap->add_option("--set", c.set_arg, "set file or literal {a,b}");
    add_param_flags(cap, c);
    cap->add_option("--Lambda", c.lambda, "relative: outer ball factor")->capture_default_str();
    cap->add_flag("--outer-closed", c.outer_closed, "relative: closed outer ball");
    cap->add_option("--center", center, "relative: center id");
    cap->add_option("--radius", radius, "relative: radius r");
    cap->add_option("--tol", c.tol, "solver tolerance (default CAPKIT_TOL or 1e-6)");
    cap->add_option("--cert", cert_path, "check: certificate to re-validate");
    cap->add_option("-o,--out", c.out_path, "write the certificate here");

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "numerical checks of the inequalities");
    ver->require_subcommand(1);
    auto* vc = ver->add_subcommand("check", "run one check");
    vc->add_option("id", va.check_id, "check id")->required();
    vc->add_option("--instance", va.instance, "grid:DIM:LEVEL | cantor:RATIO:DEPTH | two_point | three_chain");
    vc->add_option("--space", c.space_path, "custom space file instead of --instance");
    vc->add_option("--set", c.set_arg, "set for set-valued checks on a custom space");
    add_param_flags(vc, c);
    vc->add_option("--Lambda", c.lambda, "outer ball factor")->capture_default_str();
    auto* vs = ver->add_subcommand("suite", "run the default suite");
    for (auto* sub : {vc, vs}) {
        sub->add_option("--seed", va.seed, "random seed")->capture_default_str();
        sub->add_option("--samples", va.samples, "random inputs per check")->capture_default_str();
        sub->add_option("--tol", c.tol, "solver tolerance");
        sub->add_flag("--full-samples", va.full_samples, "use --samples even for the expensive checks");
        sub->add_flag("--timings", va.timings, "include runtimes (breaks byte-identical reruns)");
        sub->add_option("-o,--out", c.out_path, "report file (default stdout)");
        sub->add_option("--csv", va.csv_path, "also write check_id,instance,lhs,rhs,ratio");
    }
    vs->add_option("--jobs", va.jobs, "worker threads")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    try {
        if (*sv)
            return run_space_validate(c);
        if (*sb)
            return run_space_build(bs, c.out_path);
        if (*op)
            return run_op(op_which, c, oa);
        if (*ct)
            return run_content(c, d, rho, greedy);
        if (*cap) {
            if (cap_which == "check") {
                if (cert_path.empty())
                    throw Error("cap check needs --cert");
                return run_cap_check(c, cert_path);
            }
            return run_cap(cap_which, c, center, radius);
        }
        if (*vc)
            return run_verify_check(c, va);
        if (*vs)
            return run_verify_suite(c, va);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitInvalid;
}
