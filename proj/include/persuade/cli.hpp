#pragma once

// Command-line front end. Exit codes: 0 success, 1 invalid input,
// 2 infeasible or not rationalizable, 3 refused precondition, 4 limit
// exceeded or internal error.

#include "persuade/experiments.hpp"
#include "persuade/identification.hpp"
#include "persuade/oracle.hpp"
#include "persuade/two_action.hpp"
#include "persuade/two_state.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace persuade::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { kOk = 0, kInvalid = 1, kInfeasible = 2, kRefused = 3, kLimit = 4 };

struct Instance {
    DecisionProblem problem;
    Dist alpha;
    std::optional<Experiment> experiment;
};

// ---- JSON codec -----------------------------------------------------------

inline Json rat_json(const Rat& r) { return to_string(r); }

inline Json vec_json(const Vec& v) {
    Json out = Json::array();
    for (const auto& x : v) out.push_back(to_string(x));
    return out;
}

inline Json matrix_json(const Matrix& m) {
    Json out = Json::array();
    for (const auto& row : m) out.push_back(vec_json(row));
    return out;
}

/// Labelled vector: {"label": "p/q", ...}.
inline Json labelled(const std::vector<std::string>& labels, const Vec& v) {
    Json out = Json::object();
    for (std::size_t i = 0; i < v.size(); ++i) out[labels[i]] = to_string(v[i]);
    return out;
}

inline Rat json_rat(const Json& j, const std::string& what) {
    if (j.is_string()) return parse_rat(j.get<std::string>());
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_number()) throw InvalidInput(what + ": write non-integers as \"p/q\" strings to keep them exact");
    throw InvalidInput(what + ": expected a rational");
}

inline Vec json_vec(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InvalidInput(what + ": expected an array");
    Vec out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_rat(j[i], what + "[" + std::to_string(i) + "]"));
    return out;
}

inline Matrix json_matrix(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InvalidInput(what + ": expected an array of rows");
    Matrix out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(json_vec(j[i], what + "[" + std::to_string(i) + "]"));
    return out;
}

inline std::vector<std::string> json_labels(const Json& j, const std::string& what) {
    if (!j.is_array()) throw InvalidInput(what + ": expected an array of labels");
    std::vector<std::string> out;
    for (const auto& x : j) {
        if (!x.is_string()) throw InvalidInput(what + ": labels must be strings");
        out.push_back(x.get<std::string>());
    }
    return out;
}

inline const Json& field(const Json& j, const char* key) {
    if (!j.contains(key)) throw InvalidInput(std::string("instance: missing field '") + key + "'");
    return j.at(key);
}

/// Reads an instance without checking the problem's consistency.
inline Instance parse_instance_raw(const Json& j) {
    if (!j.is_object()) throw InvalidInput("instance: expected a JSON object");
    Instance in;
    in.problem.states = json_labels(field(j, "states"), "states");
    in.problem.actions = json_labels(field(j, "actions"), "actions");
    in.problem.u = json_matrix(field(j, "receiver_utility"), "receiver_utility");
    in.problem.v = json_vec(field(j, "sender_utility"), "sender_utility");
    in.alpha = json_vec(field(j, "action_data"), "action_data");
    if (j.contains("experiment")) {
        const Json& e = j.at("experiment");
        Experiment exp;
        exp.matrix = json_matrix(field(e, "matrix"), "experiment.matrix");
        if (e.contains("outcome")) exp.outcome = json_vec(e.at("outcome"), "experiment.outcome");
        in.experiment = exp;
    }
    return in;
}

inline Instance parse_instance(const Json& j) {
    Instance in = parse_instance_raw(j);
    in.problem = validate_problem(in.problem);
    check_dist(in.alpha, in.problem.num_actions(), "action data");
    if (in.experiment) in.experiment->validate(in.problem.num_states());
    return in;
}

inline Json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open '" + path + "'");
    try {
        return Json::parse(f);
    } catch (const Json::parse_error& e) {
        throw InvalidInput("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline Json signal_json(const DecisionProblem& p, const Signal& s) {
    Json out;
    out["messages"] = s.messages;
    out["kernel"] = matrix_json(s.kernel);
    Json pi = Json::object();
    for (std::size_t w = 0; w < s.kernel.size(); ++w)
        for (std::size_t m = 0; m < s.messages.size(); ++m)
            pi["pi[" + s.messages[m] + "|" + p.states[w] + "]"] = to_string(s.kernel[w][m]);
    out["probabilities"] = pi;
    return out;
}

inline Signal parse_signal(const Json& j, std::size_t states) {
    if (!j.is_object()) throw InvalidInput("signal: expected a JSON object");
    Signal s;
    s.messages = json_labels(field(j, "messages"), "signal.messages");
    s.kernel = json_matrix(field(j, "kernel"), "signal.kernel");
    s.validate(states);
    return s;
}

inline Json report_json(const DecisionProblem& p, const SaddleReport& r) {
    Json out;
    out["signal"] = signal_json(p, r.signal);
    out["prior"] = vec_json(r.prior);
    out["value"] = rat_json(r.value);
    out["verified"] = r.verified;
    if (!r.notes.empty()) out["notes"] = r.notes;
    return out;
}

inline SaddleReport parse_report(const Json& j, const DecisionProblem& p) {
    SaddleReport r;
    r.signal = parse_signal(field(j, "signal"), p.num_states());
    r.prior = json_vec(field(j, "prior"), "report.prior");
    check_dist(r.prior, p.num_states(), "report prior");
    r.value = json_rat(field(j, "value"), "report.value");
    return r;
}

// ---- plots ----------------------------------------------------------------

struct Series {
    std::vector<Rat> x, y;
};

inline std::string series_csv(const Series& s) {
    std::ostringstream out;
    out << "x,exact,decimal\n";
    out << std::setprecision(12);
    for (std::size_t k = 0; k < s.x.size(); ++k)
        out << to_string(s.x[k]) << ',' << to_string(s.y[k]) << ',' << to_double(s.y[k]) << '\n';
    return out.str();
}

inline std::string series_svg(const Series& s, const std::string& title, const std::string& xlabel) {
    const double w = 480, h = 320, m = 40;
    double lo = 0, hi = 1;
    for (const auto& y : s.y) {
        lo = std::min(lo, to_double(y));
        hi = std::max(hi, to_double(y));
    }
    auto px = [&](const Rat& x) { return m + to_double(x) * (w - 2 * m); };
    auto py = [&](double y) { return h - m - (y - lo) / (hi - lo) * (h - 2 * m); };
    std::ostringstream out;
    out << std::fixed << std::setprecision(2);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w << "\" height=\"" << h << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "  <line x1=\"" << m << "\" y1=\"" << h - m << "\" x2=\"" << w - m << "\" y2=\"" << h - m
        << "\" stroke=\"black\"/>\n"
        << "  <line x1=\"" << m << "\" y1=\"" << m << "\" x2=\"" << m << "\" y2=\"" << h - m << "\" stroke=\"black\"/>\n"
        << "  <text x=\"" << w / 2 << "\" y=\"" << m / 2 << "\" text-anchor=\"middle\">" << title << "</text>\n"
        << "  <text x=\"" << w / 2 << "\" y=\"" << h - 8 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n"
        << "  <text x=\"" << m - 4 << "\" y=\"" << py(lo) << "\" text-anchor=\"end\">" << lo << "</text>\n"
        << "  <text x=\"" << m - 4 << "\" y=\"" << py(hi) << "\" text-anchor=\"end\">" << hi << "</text>\n"
        << "  <polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < s.x.size(); ++k) out << (k ? " " : "") << px(s.x[k]) << ',' << py(to_double(s.y[k]));
    out << "\"/>\n</svg>\n";
    return out.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw InvalidInput("cannot write '" + path + "'");
    f << text;
}

/// Grid k/den for k = 0..den, merged with extra break points.
inline std::vector<Rat> plot_grid(long den, const std::vector<Rat>& extra = {}) {
    if (den < 1) throw InvalidInput("grid denominator must be positive");
    std::vector<Rat> xs;
    for (long k = 0; k <= den; ++k) xs.emplace_back(k, den);
    for (const auto& x : extra)
        if (x >= 0 && x <= 1) xs.push_back(x);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// ---- commands -------------------------------------------------------------

struct Options {
    std::string instance;
    std::string output;
    bool allow_redundant = false;
    long grid_denominator = 0; // 0: command default
    std::size_t max_messages = 12;

    std::string prior;
    bool two_state = false, two_action = false;
    std::string signal_file, report_file;
    std::string csv, svg;
    long prior_denominator = 12;
    std::size_t max_signals = 20000;
    std::string quantity;
    std::string from, to;
};

inline void refuse_redundant(const DecisionProblem& p, bool allow) {
    if (allow) return;
    for (std::size_t a = 0; a < p.num_actions(); ++a)
        if (is_redundant(p, a).holds)
            throw PreconditionRefused("action '" + p.actions[a] +
                                      "' is redundant; pass --allow-redundant to proceed anyway");
}

inline Dist parse_prior(const std::string& text, const DecisionProblem& p) {
    if (text.empty()) throw InvalidInput("--prior is required");
    Dist mu = parse_vec(text);
    check_dist(mu, p.num_states(), "prior");
    return mu;
}

inline Json two_action_summary(const TwoActionView& view) {
    Json out;
    const auto& p = view.problem;
    out["favored_action"] = p.actions[view.one];
    out["other_action"] = p.actions[view.zero];
    out["gap"] = labelled(p.states, view.gap_by_state());
    Json low = Json::array();
    for (std::size_t r = 0; r < view.low_count; ++r) low.push_back(p.states[view.order[r]]);
    out["low_states"] = low;
    return out;
}

inline Json cutoff_json(const TwoActionView& view, const CutoffParams& cp) {
    Json out;
    out["eligible"] = cp.eligible;
    out["cutoff_state"] = view.problem.states[view.order[cp.i]];
    out["z"] = rat_json(cp.z);
    out["value"] = rat_json(cp.Pi);
    return out;
}

inline int cmd_validate(const Options& o, Json& out) {
    Instance in = parse_instance_raw(read_json_file(o.instance));
    const auto& p = in.problem;
    std::vector<std::string> violations = problem_violations(p);
    Json warnings = Json::array();
    if (violations.empty()) {
        try {
            check_dist(in.alpha, p.num_actions(), "action data");
        } catch (const InvalidInput& e) {
            violations.push_back(e.what());
        }
        if (in.experiment) {
            try {
                in.experiment->validate(p.num_states());
            } catch (const InvalidInput& e) {
                violations.push_back(e.what());
            }
        }
    }
    out["valid"] = violations.empty();
    out["violations"] = violations;
    if (!violations.empty()) {
        out["warnings"] = warnings;
        return kInvalid;
    }
    Json dominated = Json::array(), redundant = Json::array();
    for (std::size_t a = 0; a < p.num_actions(); ++a) {
        if (is_dominated(p, a).holds) dominated.push_back(p.actions[a]);
        if (is_redundant(p, a).holds) {
            redundant.push_back(p.actions[a]);
            warnings.push_back("action '" + p.actions[a] + "' is redundant");
        }
    }
    for (auto a : support(in.alpha))
        if (is_dominated(p, a).holds) warnings.push_back("observed action '" + p.actions[a] + "' is dominated");
    out["warnings"] = warnings;
    out["dominated"] = dominated;
    out["redundant"] = redundant;
    out["states"] = p.num_states();
    out["actions"] = p.num_actions();
    if (p.num_actions() == 2) {
        try {
            out["two_action"] = two_action_summary(classify_states(p));
        } catch (const Error& e) {
            out["two_action"] = std::string("not applicable: ") + e.what();
        }
    }
    if (p.num_states() == 2) {
        try {
            out["thresholds"] = vec_json(thresholds(p).xi);
        } catch (const Error& e) {
            out["thresholds"] = std::string("not applicable: ") + e.what();
        }
    }
    return kOk;
}

inline int cmd_identify(const Options& o, Json& out) {
    Instance in = parse_instance(read_json_file(o.instance));
    const auto& p = in.problem;
    refuse_redundant(p, o.allow_redundant);
    Dist mu = parse_prior(o.prior, p);
    auto rat = rationalizes(p, mu, in.alpha);
    out["prior"] = vec_json(mu);
    out["action_data"] = vec_json(in.alpha);
    out["rationalizable"] = rat.holds;
    if (!rat.holds) {
        out["reason"] = rat.reason;
        return kInfeasible;
    }
    Signal sig = witness_signal(p, mu, in.alpha, *rat.witness);
    Json w = signal_json(p, sig);
    Json beliefs = Json::object();
    for (std::size_t j = 0; j < rat.witness->actions.size(); ++j)
        beliefs[p.actions[rat.witness->actions[j]]] = vec_json(rat.witness->beliefs[j]);
    w["beliefs"] = beliefs;
    w["straightforward"] = straightforward_check(p, mu, sig, in.alpha);
    out["witness"] = w;
    return kOk;
}

inline int cmd_solve_two_state(const Options& o, const Instance& in, Json& out) {
    const auto& p = in.problem;
    require_two_states(p);
    const SaddleReport r = p.num_actions() == 2 ? solve_two_by_two(p, in.alpha) : solve_two_state(p, in.alpha);
    const Interval iv = identified_interval(p, in.alpha);
    const DataValueGap gap = data_value_gap(p, in.alpha);
    out = report_json(p, r);
    out["identified_interval"] = {rat_json(iv.lo), rat_json(iv.hi)};
    out["thresholds"] = vec_json(thresholds(p).xi);
    Json env = Json::array();
    for (const auto& [x, y] : concave_envelope(p).points) env.push_back({rat_json(x), rat_json(y)});
    out["envelope"] = env;
    out["data_value"] = rat_json(gap.data_value);
    out["strict_improvement"] = gap.guarantee > gap.data_value;
    const long den = o.grid_denominator > 0 ? o.grid_denominator : 100;
    if (!o.csv.empty()) write_file(o.csv, envelope_csv(p, den));
    if (!o.svg.empty()) {
        const EnvelopeFn f = concave_envelope(p);
        Series s;
        s.x = plot_grid(den, thresholds(p).xi);
        for (const auto& x : s.x) s.y.push_back(f(x));
        write_file(o.svg, series_svg(s, "concave envelope of the sender payoff", "belief in the high state"));
    }
    return kOk;
}

inline int cmd_solve_two_action(const Options& o, const Instance& in, Json& out) {
    const auto& p = in.problem;
    const TwoActionView view = classify_states(p);
    const Rat alpha = in.alpha[view.one];
    out = two_action_summary(view);
    out["alpha"] = rat_json(alpha);
    if (!o.signal_file.empty()) {
        Signal sig = parse_signal(read_json_file(o.signal_file), p.num_states());
        GuaranteeOptions gopt;
        gopt.max_messages = o.max_messages;
        std::optional<PriorConstraint> c;
        if (in.experiment && in.experiment->outcome) c = in.experiment->constraint();
        auto g = guarantee(view, sig, alpha, c, gopt);
        Json gj;
        gj["value"] = rat_json(g.value);
        gj["attained"] = g.attained;
        gj[g.attained ? "minimizer" : "limit_prior"] = vec_json(g.witness);
        gj["favored_messages"] = g.pattern;
        gj["regions"] = g.regions;
        out["guarantee"] = gj;
    }
    if (!o.prior.empty()) {
        Dist mu = parse_prior(o.prior, p);
        auto opt = known_prior_optimum(view, mu);
        Json kj = cutoff_json(view, opt.params);
        kj["prior"] = vec_json(mu);
        kj["signal"] = signal_json(p, opt.signal.pruned());
        out["known_prior_optimum"] = kj;
    }
    if (p.num_states() == 2) {
        out["saddle"] = report_json(p, solve_two_by_two(p, in.alpha));
        return kOk;
    }
    auto w = no_saddle_witness(view, alpha);
    Json nj;
    nj["certificate"] = w.certificate;
    if (w.trivial_saddle) {
        nj["saddle"] = report_json(p, *w.trivial_saddle);
    } else if (w.single_low) {
        nj["c12"] = rat_json(w.c12);
        nj["c13"] = rat_json(w.c13);
        Json fam = Json::array();
        for (std::size_t k = 0; k < w.family.size(); ++k)
            fam.push_back({{"lambda", rat_json(w.family[k].first)},
                           {"prior", vec_json(w.family[k].second)},
                           {"z", rat_json(w.family_z[k])}});
        nj["family"] = fam;
    } else {
        nj["mu"] = vec_json(*w.mu);
        nj["mu_cutoff"] = cutoff_json(view, *w.mu_params);
        nj["nu"] = vec_json(*w.nu);
        nj["nu_cutoff"] = cutoff_json(view, *w.nu_params);
    }
    out["no_saddle"] = nj;
    return kOk;
}

inline int cmd_solve(const Options& o, Json& out) {
    if (o.two_state == o.two_action) throw InvalidInput("solve: pass exactly one of --two-state and --two-action");
    Instance in = parse_instance(read_json_file(o.instance));
    refuse_redundant(in.problem, o.allow_redundant);
    return o.two_state ? cmd_solve_two_state(o, in, out) : cmd_solve_two_action(o, in, out);
}

inline const Experiment& require_experiment(const Instance& in) {
    if (!in.experiment) throw InvalidInput("instance has no experiment");
    return *in.experiment;
}

inline int cmd_experiment_check(const Options& o, Json& out) {
    Instance in = parse_instance(read_json_file(o.instance));
    refuse_redundant(in.problem, o.allow_redundant);
    const auto& p = in.problem;
    const Experiment& exp = require_experiment(in);
    const TwoActionView view = classify_states(p);

    auto simple = is_simple(exp.matrix);
    out["outcomes"] = exp.outcomes();
    out["simple"] = simple.simple;
    Json cells = Json::array();
    for (const auto& cell : simple.partition) {
        Json c = Json::array();
        for (auto w : cell) c.push_back(p.states[w]);
        cells.push_back(c);
    }
    out["partition"] = cells;

    auto ord = is_ordered(view, exp.matrix);
    out["ordered"] = ord.ordered;
    out["null_basis"] = matrix_json(ord.basis);
    if (!ord.ordered) {
        Json v;
        v["from_state"] = p.states[view.order[*ord.rank]];
        v["direction"] = vec_json(*ord.direction);
        v["tail_mass_positive"] = ord.mass_positive;
        out["violation"] = v;
    }
    if (view.states() >= 3)
        out["reliable"] = ord.ordered;
    else
        out["reliable"] = nullptr;
    if (simple.simple && view.states() >= 3) {
        auto verdict = simple_reliability(view, exp.matrix);
        out["simple_verdict"] = {{"reliable", verdict.reliable}, {"reason", verdict.reason}};
    }
    try {
        out["sequentially_reliable"] = sequential_reliable(view, exp.matrix, in.alpha[view.one]);
    } catch (const PreconditionRefused& e) {
        out["sequentially_reliable"] = std::string("not applicable: ") + e.what();
    }
    if (exp.outcome) out["outcome_consistent"] = consistent_outcome(exp.matrix, *exp.outcome).consistent;
    return kOk;
}

inline int cmd_experiment_solve(const Options& o, Json& out) {
    Instance in = parse_instance(read_json_file(o.instance));
    refuse_redundant(in.problem, o.allow_redundant);
    const TwoActionView view = classify_states(in.problem);
    auto sol = solve_experimenter(view, in.alpha[view.one], require_experiment(in));
    out = report_json(in.problem, sol.report);
    out["cutoff"] = cutoff_json(view, sol.params);
    return kOk;
}

inline int cmd_oracle_verify(const Options& o, Json& out) {
    Instance in = parse_instance(read_json_file(o.instance));
    refuse_redundant(in.problem, o.allow_redundant);
    const auto& p = in.problem;
    std::optional<PriorConstraint> c;
    if (in.experiment && in.experiment->outcome) c = in.experiment->constraint();

    SaddleReport report;
    if (!o.report_file.empty()) {
        report = parse_report(read_json_file(o.report_file), p);
    } else if (c) {
        report = solve_experimenter(classify_states(p), in.alpha[classify_states(p).one], *in.experiment).report;
    } else if (p.num_states() == 2) {
        report = p.num_actions() == 2 ? solve_two_by_two(p, in.alpha) : solve_two_state(p, in.alpha);
    } else {
        throw PreconditionRefused("no report given and no solver covers this instance; pass --report");
    }

    VerifyOptions vo;
    if (o.grid_denominator > 0) vo.signal_denominator = o.grid_denominator;
    vo.prior_denominator = o.prior_denominator;
    vo.max_signals = o.max_signals;
    auto res = verify_saddle(p, report, in.alpha, c, vo);
    out["report"] = report_json(p, report);
    out["passed"] = res.passed;
    out["family"] = res.family;
    out["signals_checked"] = res.signals_checked;
    out["priors_checked"] = res.priors_checked;
    if (!res.passed) {
        out["counterexample"] = res.counterexample;
        if (res.better_signal) out["better_signal"] = signal_json(p, *res.better_signal);
        if (res.worse_prior) out["worse_prior"] = vec_json(*res.worse_prior);
    }
    return kOk;
}

inline int cmd_plot(const Options& o, Json& out) {
    Instance in = parse_instance(read_json_file(o.instance));
    refuse_redundant(in.problem, o.allow_redundant);
    const auto& p = in.problem;
    const long den = o.grid_denominator > 0 ? o.grid_denominator : 100;
    std::string q = o.quantity.empty() ? (p.num_states() == 2 ? "Vhat" : "Pi") : o.quantity;
    Series s;
    std::string title, xlabel;
    if (q == "vhat" || q == "Vhat") {
        require_two_states(p);
        const auto t = thresholds(p);
        const EnvelopeFn f = concave_envelope(p);
        s.x = plot_grid(den, t.xi);
        for (const auto& x : s.x) s.y.push_back(q == "vhat" ? step_value(p, x) : f(x));
        title = q == "vhat" ? "sender payoff by belief" : "concave envelope of the sender payoff";
        xlabel = "belief in the high state";
    } else if (q == "Pi") {
        const TwoActionView view = classify_states(p);
        const std::size_t n = p.num_states();
        Dist a = o.from.empty() ? point_mass(n, view.order.front()) : parse_prior(o.from, p);
        Dist b = o.to.empty() ? point_mass(n, view.order.back()) : parse_prior(o.to, p);
        s.x = plot_grid(den);
        for (const auto& x : s.x) s.y.push_back(cutoff_params(view, scaled(a, 1 - x) + scaled(b, x)).Pi);
        title = "known-prior value along a slice";
        xlabel = "weight on the end prior";
        out["from"] = vec_json(a);
        out["to"] = vec_json(b);
    } else {
        throw InvalidInput("plot: unknown quantity '" + q + "' (expected vhat, Vhat or Pi)");
    }
    out["quantity"] = q;
    out["points"] = s.x.size();
    if (!o.csv.empty()) write_file(o.csv, series_csv(s));
    if (!o.svg.empty()) write_file(o.svg, series_svg(s, title, xlabel));
    if (o.csv.empty() && o.svg.empty()) {
        Json pts = Json::array();
        for (std::size_t k = 0; k < s.x.size(); ++k) pts.push_back({rat_json(s.x[k]), rat_json(s.y[k])});
        out["series"] = pts;
    }
    return kOk;
}

// ---- entry point ----------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Robust persuasion toolkit: exact solvers for senders facing unknown priors"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags may follow the subcommand
    Options o;
    app.add_flag("--allow-redundant", o.allow_redundant, "Proceed even if some receiver action is redundant");
    app.add_option("--grid-denominator", o.grid_denominator, "Grid denominator for plots and candidate signals")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-messages", o.max_messages, "Largest signal accepted by the guarantee computation")
        ->check(CLI::PositiveNumber);
    app.add_option("-o,--output", o.output, "Write the JSON result here instead of standard output");

    auto instance = [&](CLI::App* c) { c->add_option("instance", o.instance, "Instance JSON file")->required(); };

    auto* validate = app.add_subcommand("validate", "Check an instance and report diagnostics");
    instance(validate);

    auto* identify = app.add_subcommand("identify", "Test whether a prior rationalizes the action data");
    instance(identify);
    identify->add_option("--prior", o.prior, "Prior as comma-separated rationals")->required();

    auto* solve = app.add_subcommand("solve", "Solve the sender's robust problem");
    instance(solve);
    solve->add_flag("--two-state", o.two_state, "Two-state solver");
    solve->add_flag("--two-action", o.two_action, "Two-action analysis");
    solve->add_option("--signal", o.signal_file, "Signal JSON whose guarantee to compute (two-action)");
    solve->add_option("--prior", o.prior, "Prior for the known-prior optimum (two-action)");
    solve->add_option("--csv", o.csv, "Envelope CSV output (two-state)");
    solve->add_option("--svg", o.svg, "Envelope SVG output (two-state)");

    auto* experiment = app.add_subcommand("experiment", "Experiments constraining the prior");
    experiment->require_subcommand(1);
    auto* echeck = experiment->add_subcommand("check", "Simple, ordered and reliable diagnostics");
    instance(echeck);
    auto* esolve = experiment->add_subcommand("solve", "Saddle point under an ordered experiment");
    instance(esolve);

    auto* oracle = app.add_subcommand("oracle", "Independent checks");
    oracle->require_subcommand(1);
    auto* verify = oracle->add_subcommand("verify", "Falsification check of a saddle report");
    instance(verify);
    verify->add_option("--report", o.report_file, "Report JSON to check (default: solve the instance)");
    verify->add_option("--prior-denominator", o.prior_denominator, "Grid denominator for adversarial priors")
        ->check(CLI::PositiveNumber);
    verify->add_option("--max-signals", o.max_signals, "Cap on direct candidate signals")->check(CLI::PositiveNumber);

    auto* plot = app.add_subcommand("plot", "CSV/SVG of payoff curves");
    instance(plot);
    plot->add_option("--quantity", o.quantity, "vhat, Vhat (two states) or Pi (two actions)");
    plot->add_option("--from", o.from, "Start prior of the slice (Pi)");
    plot->add_option("--to", o.to, "End prior of the slice (Pi)");
    plot->add_option("--csv", o.csv, "CSV output (x,exact,decimal)");
    plot->add_option("--svg", o.svg, "SVG output");

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kInvalid;
    }

    Json result = Json::object();
    int code = kOk;
    try {
        if (validate->parsed())
            code = cmd_validate(o, result);
        else if (identify->parsed())
            code = cmd_identify(o, result);
        else if (solve->parsed())
            code = cmd_solve(o, result);
        else if (echeck->parsed())
            code = cmd_experiment_check(o, result);
        else if (esolve->parsed())
            code = cmd_experiment_solve(o, result);
        else if (verify->parsed())
            code = cmd_oracle_verify(o, result);
        else if (plot->parsed())
            code = cmd_plot(o, result);
    } catch (const InvalidInput& e) {
        err << "invalid input: " << e.what() << '\n';
        return kInvalid;
    } catch (const Infeasible& e) {
        err << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const PreconditionRefused& e) {
        err << "refused: " << e.what() << '\n';
        return kRefused;
    } catch (const LimitExceeded& e) {
        err << "limit exceeded: " << e.what() << '\n';
        return kLimit;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kLimit;
    }

    const std::string text = result.dump(2) + "\n";
    if (o.output.empty()) {
        out << text;
    } else {
        try {
            write_file(o.output, text);
        } catch (const InvalidInput& e) {
            err << "invalid input: " << e.what() << '\n';
            return kInvalid;
        }
    }
    return code;
}

} // namespace persuade::cli
