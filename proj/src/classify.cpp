#include "finsler/classify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "finsler/finsler.hpp"
#include "finsler/riemann.hpp"

namespace finsler {

using json = nlohmann::ordered_json;

const char* to_string(OutputFormat f) {
    switch (f) {
        case OutputFormat::Text: return "text";
        case OutputFormat::Json: return "json";
        case OutputFormat::Csv: return "csv";
    }
    return "?";
}

void RunConfig::check() const {
    if (points < 1) throw std::invalid_argument("points must be >= 1");
    if (y_per_point < 1) throw std::invalid_argument("y-per-point must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be > 0");
}

const ConditionResult& ClassReport::condition(const std::string& name) const {
    for (const auto& c : conditions)
        if (c.name == name) return c;
    throw std::out_of_range("no condition named " + name);
}

bool ClassReport::consistent() const {
    return std::all_of(implications.begin(), implications.end(),
                       [](const Implication& i) { return !i.applicable || i.holds; });
}

std::vector<int> AppendixSummary::suspect_terms() const {
    std::vector<int> out;
    for (int m = 0; m < 15; ++m)
        if (suspect_counts[static_cast<std::size_t>(m)] > 0) out.push_back(m);
    return out;
}

namespace {

std::string fmt(double v, const char* spec = "%.6e") {
    char buf[64];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

std::vector<double> sample_point(const MetricSpec& spec, std::mt19937_64& rng) {
    std::vector<double> x(static_cast<std::size_t>(spec.dim));
    for (int k = 0; k < spec.dim; ++k) {
        const auto& d = spec.domain[static_cast<std::size_t>(k)];
        const double margin = 0.05 * (d.hi - d.lo);
        std::uniform_real_distribution<double> u(d.lo + margin, d.hi - margin);
        x[static_cast<std::size_t>(k)] = u(rng);
    }
    return x;
}

std::vector<double> unit_axis(const AlphaBetaBundle& B, int i, double sign) {
    std::vector<double> y(static_cast<std::size_t>(B.n), 0.0);
    y[static_cast<std::size_t>(i)] = sign;
    const double a = B.alpha(y);
    for (double& v : y) v /= a;
    return y;
}

// Largest constituent of b_{i|j} = d_j b_i - Gamma^k_ij b_k.
double covariant_scale(const AlphaBetaBundle& B) {
    double m = std::max(1.0, B.db.max_abs());
    for (int i = 0; i < B.n; ++i)
        for (int j = 0; j < B.n; ++j) {
            double g = 0.0;
            for (int k = 0; k < B.n; ++k) g += B.gamma(k, i, j) * B.b(k);
            m = std::max(m, std::abs(g));
        }
    return m;
}

// Largest constituent of the Ricci tensor of alpha: dGamma and Gamma*Gamma.
double curvature_scale(const AlphaBetaBundle& B) {
    const double g = B.gamma.max_abs();
    return std::max({1.0, B.dgamma.max_abs(), B.n * g * g});
}

// Running verdict for one condition.
struct Tracker {
    explicit Tracker(std::string n) : name(std::move(n)) {}

    std::string name;
    bool ok = true;
    double residual = 0.0;
    double scale = 0.0;
    std::vector<double> values;

    void add(double res, double sc, double tol) {
        residual = std::max(residual, res);
        scale = std::max(scale, sc);
        if (!(res <= tol * std::max(1.0, sc))) ok = false;
    }

    ConditionResult finish(double tol, bool with_value) const {
        ConditionResult c{name, ok, residual, scale, std::nullopt};
        if (with_value && !values.empty()) {
            const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            if (*hi - *lo <= 10.0 * tol * std::max(1.0, std::abs(mean))) c.value = mean;
        }
        return c;
    }
};

}  // namespace

ClassReport run_check(const MetricSpec& spec, const RunConfig& cfg) {
    cfg.check();
    ClassReport rep;
    rep.metric = spec.name;
    rep.dim = spec.dim;
    rep.config = cfg;
    const double tol = cfg.tol;
    std::mt19937_64 rng(cfg.seed);

    Tracker killing{"beta_killing"}, closed{"beta_closed"}, const_killing{"beta_constant_killing"},
        parallel{"beta_parallel"}, conformal{"beta_conformal"}, const_length{"beta_constant_length"},
        a_einstein{"alpha_einstein"}, a_flat{"alpha_ricci_flat"}, f_einstein{"F_einstein"},
        f_flat{"F_ricci_flat"}, s_zero{"S_vanishes"}, flag{"constant_flag_curvature"};

    double max_b = 0.0;
    for (int p = 0; p < cfg.points; ++p) {
        PointSummary ps;
        ps.index = p;
        ps.x = sample_point(spec, rng);
        const AlphaBetaBundle B = build_bundle(spec, ps.x);
        const auto ys = random_unit_directions(B, cfg.y_per_point, rng);

        std::vector<std::vector<double>> design;
        for (int i = 0; i < B.n; ++i)
            for (double sign : {1.0, -1.0}) design.push_back(unit_axis(B, i, sign));
        design.insert(design.end(), ys.begin(), ys.end());
        const ScalarFit fit = extract_scalars(B, design);

        const double cs = covariant_scale(B);
        const double ks = curvature_scale(B);
        ps.bsq = B.bsq;
        ps.lambda = fit.lambda;
        ps.c = fit.c;
        ps.sigma = fit.sigma;
        ps.max_r = B.r.max_abs();
        ps.max_s = B.s.max_abs();
        ps.max_s_i = B.s_vec.max_abs();
        ps.max_Db = B.Db.max_abs();
        ps.max_ricci = B.ricci.max_abs();
        max_b = std::max(max_b, B.b.max_abs());

        killing.add(ps.max_r, cs, tol);
        closed.add(ps.max_s, cs, tol);
        const_killing.add(std::max(ps.max_r, ps.max_s_i), cs, tol);
        parallel.add(ps.max_Db, cs, tol);
        conformal.add(fit.c_residual, fit.r00_scale, tol);
        conformal.values.push_back(fit.c);
        const_length.add(B.d_bsq.max_abs(), cs, tol);
        a_einstein.add(fit.lambda_residual, fit.ricbar_scale, tol);
        a_einstein.values.push_back(fit.lambda);
        a_flat.add(ps.max_ricci, ks, tol);
        f_einstein.add(fit.sigma_residual, fit.ric_scale, tol);
        f_einstein.values.push_back(fit.sigma);

        const double ric_scale = std::max({ks, cs * cs, B.D2b.max_abs()});
        ps.K_min = INFINITY;
        ps.K_max = -INFINITY;
        for (int j = 0; j < cfg.y_per_point; ++j) {
            const auto& y = ys[static_cast<std::size_t>(j)];
            const FinslerEval ev = evaluate_finsler(B, y, fit.sigma);
            const FlagFit ff = flag_curvature_fit(B, y);
            SampleRow row;
            row.point = p;
            row.y_index = j;
            row.x = ps.x;
            row.y = y;
            row.alpha = ev.alpha;
            row.beta = ev.beta;
            row.F = ev.F;
            row.ricbar = B.ricbar(y);
            row.ric = ev.ric;
            row.ric_via_T = ev.ric_via_T;
            row.r00 = contract_y(B, y).r00;
            row.S = s_curvature_closed(B, y, cfg.volume);
            row.K = ff.K;
            row.flag_residual = ff.residual;

            f_flat.add(std::abs(ev.ric), ric_scale, tol);
            s_zero.add(std::abs(row.S), cs, tol);
            flag.add(ff.residual, ff.scale, tol);
            flag.values.push_back(ff.K);
            ps.max_abs_S = std::max(ps.max_abs_S, std::abs(row.S));
            ps.K_min = std::min(ps.K_min, ff.K);
            ps.K_max = std::max(ps.K_max, ff.K);
            rep.rows.push_back(std::move(row));
        }
        rep.points.push_back(std::move(ps));
    }
    rep.beta_vanishes = max_b == 0.0;

    // Fitted scalars must be constant across the samples for the "constant"
    // reading of K; for lambda, c, sigma they are reported when constant.
    ConditionResult flag_result = flag.finish(tol, true);
    if (!flag_result.value) flag_result.verdict = false;

    rep.conditions = {killing.finish(tol, false),      closed.finish(tol, false),
                      const_killing.finish(tol, false), parallel.finish(tol, false),
                      conformal.finish(tol, true),      const_length.finish(tol, false),
                      a_einstein.finish(tol, true),     a_flat.finish(tol, false),
                      f_einstein.finish(tol, true),     f_flat.finish(tol, false),
                      s_zero.finish(tol, false),        flag_result};

    auto v = [&](const char* name) { return rep.condition(name).verdict; };
    const bool non_riemannian = !rep.beta_vanishes;
    const bool n3 = spec.dim >= 3;
    const bool homothetic = v("beta_conformal") && rep.condition("beta_conformal").value.has_value();
    rep.implications = {
        {"beta_parallel => beta_constant_killing", true, !v("beta_parallel") || v("beta_constant_killing")},
        {"beta_constant_killing => beta_killing", true, !v("beta_constant_killing") || v("beta_killing")},
        {"alpha_ricci_flat => alpha_einstein", true, !v("alpha_ricci_flat") || v("alpha_einstein")},
        {"F_ricci_flat => F_einstein", true, !v("F_ricci_flat") || v("F_einstein")},
        {"F_einstein & beta_constant_length => alpha_ricci_flat & beta_parallel", n3 && non_riemannian,
         !(v("F_einstein") && v("beta_constant_length")) || (v("alpha_ricci_flat") && v("beta_parallel"))},
        {"F_einstein & beta_homothetic => alpha_ricci_flat & beta_parallel", n3 && non_riemannian,
         !(v("F_einstein") && homothetic) || (v("alpha_ricci_flat") && v("beta_parallel"))},
        {"S_vanishes <=> beta_constant_killing", non_riemannian, v("S_vanishes") == v("beta_constant_killing")},
        {"F_einstein & S_vanishes => F_ricci_flat", n3 && non_riemannian,
         !(v("F_einstein") && v("S_vanishes")) || v("F_ricci_flat")},
    };
    return rep;
}

namespace {

json vec_json(const std::vector<double>& v) {
    json a = json::array();
    for (double d : v) a.push_back(d);
    return a;
}

json config_json(const RunConfig& c) {
    return json{{"points", c.points},     {"y_per_point", c.y_per_point}, {"seed", c.seed},
                {"tolerance", c.tol},     {"volume", to_string(c.volume)}};
}

std::string report_json(const ClassReport& r) {
    json j;
    j["metric"] = r.metric;
    j["dim"] = r.dim;
    j["config"] = config_json(r.config);
    j["beta_vanishes"] = r.beta_vanishes;
    json conds = json::object();
    for (const auto& c : r.conditions) {
        json e{{"verdict", c.verdict}, {"residual", c.residual}, {"scale", c.scale}};
        if (c.value) e["value"] = *c.value;
        conds[c.name] = e;
    }
    j["conditions"] = conds;
    json imps = json::array();
    for (const auto& i : r.implications)
        imps.push_back({{"rule", i.rule}, {"applicable", i.applicable}, {"holds", i.holds}});
    j["implications"] = imps;
    j["consistent"] = r.consistent();
    json pts = json::array();
    for (const auto& p : r.points) {
        pts.push_back({{"index", p.index},
                       {"x", vec_json(p.x)},
                       {"bsq", p.bsq},
                       {"lambda", p.lambda},
                       {"c", p.c},
                       {"sigma", p.sigma},
                       {"max_r", p.max_r},
                       {"max_s", p.max_s},
                       {"max_s_i", p.max_s_i},
                       {"max_Db", p.max_Db},
                       {"max_ricci", p.max_ricci},
                       {"max_abs_S", p.max_abs_S},
                       {"K_min", p.K_min},
                       {"K_max", p.K_max}});
    }
    j["points"] = pts;
    return j.dump(2) + "\n";
}

std::string report_csv(const ClassReport& r) {
    std::ostringstream os;
    os << "point,y_index";
    for (int k = 1; k <= r.dim; ++k) os << ",x" << k;
    for (int k = 1; k <= r.dim; ++k) os << ",y" << k;
    os << ",alpha,beta,F,ricbar,ric,ric_via_T,r00,S,K,flag_residual\n";
    for (const auto& row : r.rows) {
        os << row.point << ',' << row.y_index;
        for (double v : row.x) os << ',' << fmt(v, "%.17g");
        for (double v : row.y) os << ',' << fmt(v, "%.17g");
        for (double v : {row.alpha, row.beta, row.F, row.ricbar, row.ric, row.ric_via_T, row.r00, row.S, row.K,
                         row.flag_residual})
            os << ',' << fmt(v, "%.17g");
        os << '\n';
    }
    return os.str();
}

std::string report_text(const ClassReport& r) {
    std::ostringstream os;
    os << "metric: " << r.metric << "  (n = " << r.dim << ")\n";
    os << "samples: " << r.config.points << " points x " << r.config.y_per_point << " directions, seed "
       << r.config.seed << ", tol " << fmt(r.config.tol, "%.1e") << ", volume " << to_string(r.config.volume)
       << "\n";
    if (r.beta_vanishes) os << "beta vanishes at every sample: F reduces to alpha, conditions hold trivially\n";
    os << "\n";
    char line[256];
    std::snprintf(line, sizeof line, "  %-24s %-8s %-14s %-14s %s\n", "condition", "verdict", "residual", "scale",
                  "value");
    os << line;
    for (const auto& c : r.conditions) {
        std::snprintf(line, sizeof line, "  %-24s %-8s %-14s %-14s %s\n", c.name.c_str(), c.verdict ? "yes" : "no",
                      fmt(c.residual, "%.3e").c_str(), fmt(c.scale, "%.3e").c_str(),
                      c.value ? fmt(*c.value, "%.10g").c_str() : "-");
        os << line;
    }
    os << "\nimplications:\n";
    for (const auto& i : r.implications) {
        os << "  [" << (!i.applicable ? "n/a" : (i.holds ? "ok" : "VIOLATED")) << "] " << i.rule << "\n";
    }
    os << (r.consistent() ? "\nconsistent\n" : "\nENGINE INCONSISTENCY\n");
    return os.str();
}

}  // namespace

std::string emit_report(const ClassReport& r, OutputFormat format) {
    switch (format) {
        case OutputFormat::Json: return report_json(r);
        case OutputFormat::Csv: return report_csv(r);
        case OutputFormat::Text: break;
    }
    return report_text(r);
}

AppendixSummary run_appendix(const MetricSpec& spec, const AppendixConfig& cfg) {
    if (cfg.points < 1) throw std::invalid_argument("points must be >= 1");
    AppendixSummary sum;
    sum.metric = spec.name;
    sum.dim = spec.dim;
    sum.tol = cfg.tol;
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> sigma_dist(-1.0, 1.0);
    for (int p = 0; p < cfg.points; ++p) {
        AppendixSample s;
        s.point = p;
        s.x = sample_point(spec, rng);
        const AlphaBetaBundle B = build_bundle(spec, s.x);
        s.y = random_unit_directions(B, 1, rng).front();
        s.sigma = cfg.sigma_policy == SigmaPolicy::Random ? sigma_dist(rng) : cfg.sigma;

        const IdentityDiagnostics d = verify_identity(B, s.y, s.sigma, cfg.tol);
        const ParityReport pr = parity_check(B, s.y, s.sigma);
        s.lhs = d.lhs;
        s.rhs = d.rhs;
        s.deviation = d.deviation;
        s.suspect_term = d.suspect_term;
        s.even_deviation = pr.even_deviation;
        s.odd_deviation = pr.odd_deviation;
        s.term_parity = pr.term_parity;
        s.contraction_mismatch =
            contraction_mismatch(contraction_set(B, s.y, s.sigma), contraction_set_naive(B, s.y, s.sigma));

        sum.max_deviation = std::max(sum.max_deviation, s.deviation);
        sum.max_even_deviation = std::max(sum.max_even_deviation, s.even_deviation);
        sum.max_odd_deviation = std::max(sum.max_odd_deviation, s.odd_deviation);
        sum.max_term_parity = std::max(sum.max_term_parity, s.term_parity);
        sum.max_contraction_mismatch = std::max(sum.max_contraction_mismatch, s.contraction_mismatch);
        if (!(s.deviation <= cfg.tol)) {
            ++sum.failures;
            if (s.suspect_term >= 0) ++sum.suspect_counts[static_cast<std::size_t>(s.suspect_term)];
        }
        sum.samples.push_back(std::move(s));
    }
    return sum;
}

std::string emit_appendix(const std::vector<AppendixSummary>& sums, OutputFormat format) {
    if (format == OutputFormat::Json) {
        json arr = json::array();
        for (const auto& s : sums) {
            json samples = json::array();
            for (const auto& a : s.samples)
                samples.push_back({{"point", a.point},
                                   {"x", vec_json(a.x)},
                                   {"y", vec_json(a.y)},
                                   {"sigma", a.sigma},
                                   {"lhs", a.lhs},
                                   {"rhs", a.rhs},
                                   {"deviation", a.deviation},
                                   {"even_deviation", a.even_deviation},
                                   {"odd_deviation", a.odd_deviation},
                                   {"term_parity", a.term_parity},
                                   {"contraction_mismatch", a.contraction_mismatch},
                                   {"suspect_term", a.suspect_term}});
            json counts = json::array();
            for (int c : s.suspect_counts) counts.push_back(c);
            arr.push_back({{"metric", s.metric},
                           {"dim", s.dim},
                           {"tolerance", s.tol},
                           {"passed", s.passed()},
                           {"failures", s.failures},
                           {"max_deviation", s.max_deviation},
                           {"max_even_deviation", s.max_even_deviation},
                           {"max_odd_deviation", s.max_odd_deviation},
                           {"max_term_parity", s.max_term_parity},
                           {"max_contraction_mismatch", s.max_contraction_mismatch},
                           {"suspect_counts", counts},
                           {"samples", samples}});
        }
        return arr.dump(2) + "\n";
    }
    std::ostringstream os;
    if (format == OutputFormat::Csv) {
        os << "metric,dim,point,sigma,lhs,rhs,deviation,even_deviation,odd_deviation,term_parity,suspect_term\n";
        for (const auto& s : sums)
            for (const auto& a : s.samples)
                os << s.metric << ',' << s.dim << ',' << a.point << ',' << fmt(a.sigma, "%.17g") << ','
                   << fmt(a.lhs, "%.17g") << ',' << fmt(a.rhs, "%.17g") << ',' << fmt(a.deviation, "%.17g") << ','
                   << fmt(a.even_deviation, "%.17g") << ',' << fmt(a.odd_deviation, "%.17g") << ','
                   << fmt(a.term_parity, "%.17g") << ',' << a.suspect_term << '\n';
        return os.str();
    }
    for (const auto& s : sums) {
        os << "metric " << s.metric << " (n = " << s.dim << "), " << s.samples.size() << " samples\n";
        os << "  max relative deviation   " << fmt(s.max_deviation, "%.3e") << "  (tol " << fmt(s.tol, "%.1e")
           << ", " << s.failures << " failing)\n";
        os << "  even line / odd line     " << fmt(s.max_even_deviation, "%.3e") << " / "
           << fmt(s.max_odd_deviation, "%.3e") << "\n";
        os << "  term parity              " << fmt(s.max_term_parity, "%.3e") << "\n";
        os << "  contraction dual route   " << fmt(s.max_contraction_mismatch, "%.3e") << "\n";
        if (!s.passed()) {
            os << "  suspect terms (m: count):";
            for (int m : s.suspect_terms()) os << ' ' << m << ':' << s.suspect_counts[static_cast<std::size_t>(m)];
            os << "\n";
        }
        os << (s.passed() ? "  identity holds\n" : "  IDENTITY MISMATCH\n");
    }
    return os.str();
}

}  // namespace finsler
