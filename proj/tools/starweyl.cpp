#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "starweyl/io.hpp"
#include "starweyl/verify.hpp"
#include "starweyl/weyl_poly.hpp"

using namespace starweyl;

namespace {

struct Config {
    std::string hbar = "1";
    std::string kappa = "0";
    std::string tau = "0";
    std::string mode = "exact";
    double tol = 1e-9;
    double trunc = 40.0;
    int nodes = 16;
    std::string grid = "-1:1:5";
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "json";
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<GridPoint> parse_grid(const std::string& s)
{
    std::stringstream ss(s);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c))
        throw UsageError("--grid expects lo:hi:n");
    const int n = std::stoi(c);
    if (n < 1 || n > 200)
        throw UsageError("--grid count must be in 1..200");
    return sample_grid(std::stod(a), std::stod(b), n);
}

struct Context {
    Config cfg;
    W2 ord;
    GaussQ kappa_q, tau_q;
    QuadratureSpec spec;
    std::vector<GridPoint> grid;

    void resolve()
    {
        if (cfg.mode != "exact" && cfg.mode != "float")
            throw UsageError("--mode must be exact or float");
        if (cfg.format != "json" && cfg.format != "csv")
            throw UsageError("--format must be json or csv");
        kappa_q = parse_gauss(cfg.kappa);
        tau_q = parse_gauss(cfg.tau);
        ord = W2{parse_complex(cfg.hbar), kappa_q.to_complex(), tau_q.to_complex()};
        if (ord.hbar == cplx(0.0))
            throw UsageError("--hbar must be nonzero");
        spec.abs_tol = spec.rel_tol = cfg.tol;
        spec.trunc = cfg.trunc;
        spec.nodes_per_unit = cfg.nodes;
        grid = parse_grid(cfg.grid);
    }

    OrderingKey key() const { return OrderingKey::kappa_tau(kappa_q, tau_q); }

    json config_json() const
    {
        return {{"hbar", to_json(ord.hbar)}, {"kappa", to_json(ord.kappa)}, {"tau", to_json(ord.tau)},
                {"mode", cfg.mode},          {"tol", cfg.tol},              {"trunc", cfg.trunc},
                {"nodes", cfg.nodes},        {"grid", cfg.grid},            {"seed", cfg.seed}};
    }
};

void emit(const Context& ctx, const std::string& text)
{
    if (ctx.cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(ctx.cfg.out, std::ios::binary);
    if (!f)
        throw UsageError("cannot write " + ctx.cfg.out);
    f << text;
}

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// "u", "v", "1", inline JSON or @file.json.
json poly_arg(const std::string& s)
{
    auto gen = [](int i) {
        json e = json::array({0, 0});
        if (i >= 0)
            e[static_cast<std::size_t>(i)] = 1;
        return json{{"n", 2}, {"terms", {{{"exp", e}, {"coeff", {{"hbar_pow", 0}, {"re", "1"}, {"im", "0"}}}}}}};
    };
    if (s == "u")
        return gen(0);
    if (s == "v")
        return gen(1);
    if (s == "1")
        return gen(-1);
    if (!s.empty() && s[0] == '@') {
        std::ifstream f(s.substr(1));
        if (!f)
            throw UsageError("cannot read " + s.substr(1));
        return json::parse(f);
    }
    return json::parse(s);
}

std::string poly_output(const Context& ctx, const json& poly, const std::string& what)
{
    if (ctx.cfg.format == "json")
        return json{{"command", what}, {"config", ctx.config_json()}, {"result", poly}}.dump(2) + "\n";
    std::string out = "exp,hbar_pow,re,im\n";
    for (const json& t : poly.at("terms")) {
        std::string e;
        for (const json& k : t.at("exp"))
            e += (e.empty() ? "" : " ") + std::to_string(k.get<int>());
        const json& c = t.at("coeff");
        auto field = [](const json& x) { return x.is_string() ? x.get<std::string>() : num(x.get<double>()); };
        out += e + "," + std::to_string(c.value("hbar_pow", 0)) + "," + field(c.at("re")) + "," + field(c.at("im")) + "\n";
    }
    return out;
}

std::string records_output(const Context& ctx, const std::string& what, cplx z, const std::vector<Estimate>& vals,
                           json extra = json::object())
{
    if (ctx.cfg.format == "json") {
        json recs = json::array();
        for (std::size_t i = 0; i < vals.size(); ++i)
            recs.push_back(record(ctx.grid[i].first, ctx.grid[i].second, z, vals[i]));
        json j{{"command", what}, {"config", ctx.config_json()}, {"records", recs}};
        for (auto& [k, v] : extra.items())
            j[k] = v;
        return j.dump(2) + "\n";
    }
    std::string out;
    for (auto& [k, v] : extra.items())
        out += "# " + k + " = " + v.dump() + "\n";
    out += "u_re,u_im,v_re,v_im,z_re,z_im,value_re,value_im,err_est\n";
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const auto [u, v] = ctx.grid[i];
        out += num(u.real()) + "," + num(u.imag()) + "," + num(v.real()) + "," + num(v.imag()) + "," + num(z.real()) +
               "," + num(z.imag()) + "," + num(vals[i].value.real()) + "," + num(vals[i].value.imag()) + "," +
               num(vals[i].err) + "\n";
    }
    return out;
}

std::vector<Estimate> eval_closed(const Context& ctx, const std::function<cplx(cplx, cplx)>& f)
{
    std::vector<Estimate> v;
    for (auto [a, b] : ctx.grid)
        v.push_back({f(a, b), 0.0});
    return v;
}

Method parse_method(const std::string& m)
{
    if (m == "auto")
        return Method::Auto;
    if (m == "direct")
        return Method::Direct;
    if (m == "tail")
        return Method::Tail;
    throw UsageError("--method must be auto, direct or tail");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Star products, star functions and verification suites on the Weyl algebra W_2"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "key = value file mirroring the flags");
    app.config_formatter(std::make_shared<CLI::ConfigINI>());

    Context ctx;
    Config& c = ctx.cfg;
    app.add_option("--hbar", c.hbar, "hbar (complex, e.g. 1 or 0.5+0.2i)")->capture_default_str();
    app.add_option("--kappa", c.kappa, "kappa of the (kappa, tau)-ordering")->capture_default_str();
    app.add_option("--tau", c.tau, "tau of the (kappa, tau)-ordering")->capture_default_str();
    app.add_option("--mode", c.mode, "exact or float")->capture_default_str();
    app.add_option("--tol", c.tol, "quadrature tolerance")->capture_default_str();
    app.add_option("--trunc", c.trunc, "truncation length of half-infinite contours")->capture_default_str();
    app.add_option("--nodes", c.nodes, "quadrature nodes per unit length")->capture_default_str();
    app.add_option("--grid", c.grid, "sample grid lo:hi:n for u and v")->capture_default_str();
    app.add_option("--seed", c.seed, "seed of the random suites")->capture_default_str();
    app.add_option("--out", c.out, "output file (default stdout)");
    app.add_option("--format", c.format, "json or csv")->capture_default_str();

    std::vector<std::string> mul_args;
    auto* mul = app.add_subcommand("mul", "star product of polynomials (u, v, 1, JSON or @file)");
    mul->add_option("factors", mul_args)->required()->expected(2, 64);

    std::string tw_arg, to_kappa = "0", to_tau = "0";
    auto* tw = app.add_subcommand("intertwine", "move a polynomial to another (kappa, tau)-ordering");
    tw->add_option("poly", tw_arg)->required();
    tw->add_option("--to-kappa", to_kappa)->capture_default_str();
    tw->add_option("--to-tau", to_tau)->capture_default_str();

    std::string t_arg = "0.5";
    int lin_var = -1;
    auto* ex = app.add_subcommand("exp", "e_*^{t 2uv/(i hbar)}, or e_*^{t u_k/(i hbar)} with --linear k");
    ex->add_option("--t", t_arg)->capture_default_str();
    ex->add_option("--linear", lin_var, "0 for u, 1 for v");

    std::string z_arg = "1", y_arg = "1", method = "auto";
    int sign = +1;
    auto* inv = app.add_subcommand("inverse", "(z + X)^{-1}_+ (sign +1) or (z + X)^{-1}_- (sign -1)");
    inv->add_option("--z", z_arg)->capture_default_str();
    inv->add_option("--sign", sign)->check(CLI::IsMember({-1, 1}))->capture_default_str();
    inv->add_option("--method", method)->capture_default_str();

    auto* gam = app.add_subcommand("gamma", "Gamma_*(z + sign X)");
    gam->add_option("--z", z_arg)->capture_default_str();
    gam->add_option("--sign", sign)->check(CLI::IsMember({-1, 1}))->capture_default_str();
    gam->add_option("--method", method)->capture_default_str();

    auto* bet = app.add_subcommand("beta", "B_*(z + sign X, y)");
    bet->add_option("--z", z_arg)->capture_default_str();
    bet->add_option("--y", y_arg)->capture_default_str();
    bet->add_option("--sign", sign)->check(CLI::IsMember({-1, 1}))->capture_default_str();

    app.add_subcommand("delta", "delta_* on the grid with the fitted J_0(2uv/hbar) constant");

    int res_k = 0;
    auto* res = app.add_subcommand("residue", "residue of e^{zt} e_*^{t 2X} at i pi (k + 1/2)");
    res->add_option("--k", res_k)->capture_default_str();
    res->add_option("--z", z_arg)->capture_default_str();

    int th_N = 50, th_k = 1;
    auto* th = app.add_subcommand("theta", "partial sums of sum_n e_*^{2n u_k/(i hbar)}");
    th->add_option("--N", th_N)->capture_default_str();
    th->add_option("--k", th_k, "0 for u, 1 for v")->capture_default_str();

    std::string suite = "all";
    auto* ver = app.add_subcommand("verify", "run a verification suite; exit code 0 iff all checks pass");
    ver->add_option("suite", suite, "all or one of the suite names")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        ctx.resolve();
        const bool exact = c.mode == "exact";
        const W2& o = ctx.ord;

        if (*mul) {
            if (exact) {
                ExactPoly r = exact_poly_from_json(poly_arg(mul_args[0]));
                for (std::size_t i = 1; i < mul_args.size(); ++i)
                    r = star_mul(r, exact_poly_from_json(poly_arg(mul_args[i])), ctx.key());
                emit(ctx, poly_output(ctx, to_json(r), "mul"));
            } else {
                CPoly r = float_poly_from_json(poly_arg(mul_args[0]), o.hbar);
                for (std::size_t i = 1; i < mul_args.size(); ++i)
                    r = star_mul(r, float_poly_from_json(poly_arg(mul_args[i]), o.hbar), ctx.key(), o.hbar);
                emit(ctx, poly_output(ctx, to_json(r), "mul"));
            }
            return 0;
        }
        if (*tw) {
            const OrderingKey to = OrderingKey::kappa_tau(parse_gauss(to_kappa), parse_gauss(to_tau));
            if (exact)
                emit(ctx, poly_output(ctx, to_json(intertwine(exact_poly_from_json(poly_arg(tw_arg)), ctx.key(), to)),
                                      "intertwine"));
            else
                emit(ctx, poly_output(ctx,
                                      to_json(intertwine(float_poly_from_json(poly_arg(tw_arg), o.hbar), ctx.key(), to,
                                                         o.hbar)),
                                      "intertwine"));
            return 0;
        }
        if (*ex) {
            const cplx t = parse_complex(t_arg);
            const ExpElement e = lin_var >= 0 ? star_exp_linear(t, lin_var, o) : star_exp_quadratic(t, o);
            emit(ctx, records_output(ctx, "exp", t, eval_closed(ctx, [&](cplx u, cplx v) { return e.eval(u, v); }),
                                     {{"element", to_json(e)}}));
            return 0;
        }
        const cplx z = parse_complex(z_arg);
        if (*inv) {
            const auto ev = sign > 0 ? inverse_plus(z, o, ctx.spec, parse_method(method)) : inverse_minus(z, o, ctx.spec);
            emit(ctx, records_output(ctx, "inverse", z, ev.eval_grid(ctx.grid), {{"sign", sign}}));
            return 0;
        }
        if (*gam) {
            const auto ev = star_gamma(z, o, ctx.spec, sign, parse_method(method));
            emit(ctx, records_output(ctx, "gamma", z, ev.eval_grid(ctx.grid), {{"sign", sign}}));
            return 0;
        }
        if (*bet) {
            const cplx y = parse_complex(y_arg);
            const auto ev = star_beta(z, y, o, ctx.spec, sign);
            emit(ctx, records_output(ctx, "beta", z, ev.eval_grid(ctx.grid), {{"sign", sign}, {"y", to_json(y)}}));
            return 0;
        }
        if (app.got_subcommand("delta")) {
            const auto vals = star_delta(o, ctx.spec).eval_grid(ctx.grid);
            std::vector<cplx> f, g;
            for (std::size_t i = 0; i < vals.size(); ++i) {
                f.push_back(vals[i].value);
                g.push_back(bessel_j0(2.0 * ctx.grid[i].first * ctx.grid[i].second / o.hbar));
            }
            const RatioFit fit = fit_ratio(f, g);
            emit(ctx, records_output(ctx, "delta", 0.0, vals,
                                     {{"j0_constant", to_json(fit.constant)}, {"ratio_variance", fit.variance}}));
            return 0;
        }
        if (*res) {
            const auto ev = residue_at(res_k, o, ctx.spec, z);
            emit(ctx, records_output(ctx, "residue", z, ev.eval_grid(ctx.grid), {{"k", res_k}}));
            return 0;
        }
        if (*th) {
            const ThetaSum t = theta_partial_sum(th_N, th_k, o);
            if (t.convergence_warning)
                std::cerr << "warning: |q| >= 1, the partial sums diverge as N grows\n";
            emit(ctx, records_output(ctx, "theta", 0.0, eval_closed(ctx, [&](cplx u, cplx v) { return t.sum.eval(u, v); }),
                                     {{"N", th_N}, {"k", th_k}, {"convergence_warning", t.convergence_warning}}));
            return 0;
        }
        if (*ver) {
            VerifyOptions opt;
            opt.hbar = o.hbar;
            opt.grid = ctx.grid;
            opt.spec = ctx.spec;
            opt.seed = c.seed;
            const auto reports = run_suites(suite, opt);
            bool ok = true;
            for (const auto& r : reports)
                ok = ok && r.pass();
            if (c.format == "json") {
                json all = json::array();
                for (const auto& r : reports)
                    all.push_back(to_json(r));
                emit(ctx, json{{"config", ctx.config_json()}, {"pass", ok}, {"suites", all}}.dump(2) + "\n");
            } else {
                std::string out = "suite,id,anchor,max_residual,tolerance,pass,runtime,note\n";
                auto quote = [](std::string s) {
                    std::string q = "\"";
                    for (char ch : s)
                        q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
                    return q + "\"";
                };
                for (const auto& r : reports)
                    for (const Check& k : r.checks)
                        out += r.suite + "," + k.id + "," + quote(k.anchor) + "," + num(k.residual) + "," +
                               num(k.tolerance) + "," + (k.pass ? "true" : "false") + "," + num(k.runtime) + "," +
                               quote(k.note) + "\n";
                emit(ctx, out);
            }
            return ok ? 0 : 1;
        }
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const StarError& e) {
        std::cerr << "error: " << e.what() << "\n  violated hypothesis: " << e.hypothesis() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
