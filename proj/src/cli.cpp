#include "pcf/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <functional>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "pcf/parse.hpp"
#include "pcf/svg.hpp"

namespace pcf::cli {

namespace {

using json = nlohmann::ordered_json;

struct Cmd {
    std::string name;
    std::string pos0, pos1;  // positionals (scalar: CLI11 must not split brackets)
    const std::string& pos(std::size_t i) const { return i == 0 ? pos0 : pos1; }
    // options
    std::string field = "q";
    std::string cutoff = "-50";
    std::size_t max_terms = 32;
    std::string format = "text";
    std::string svg_path;
    std::size_t n = 0;
    bool n_set = false;
    std::string p_arg, q_arg;
    std::size_t max_period = 8;
    std::string threshold;
    std::string t_max = "16";
    std::size_t count = 6;
    std::size_t depth = 12;
    std::vector<std::string> excludes;
    std::size_t budget = 4096;
};

struct Output {
    int code = 0;
    std::string text;
    json j;
    bool has_json = false;
};

template <CoefficientField F>
json fraction_json(const RationalPuiseux<F>& x) {
    return json{{"num", x.num().str()}, {"den", x.den().str()}, {"text", x.str()}};
}

template <CoefficientField F>
json cf_json(const CFExpression<F>& cf, const std::string& status) {
    json partials = json::array();
    for (const auto& f : cf.partials()) partials.push_back(f.str());
    return json{{"f0", cf.f0().str()},
                {"partials", partials},
                {"finite", cf.finite()},
                {"status", status}};
}

template <CoefficientField F>
json point_json(const BerkPoint<F>& pt) {
    return json{{"center", detail::render_terms(pt.field(), pt.center_terms())},
                {"radius", pt.radius().str()},
                {"text", pt.str()}};
}

template <CoefficientField F>
json ball_json(const Ball<F>& b) {
    return json{{"center", detail::render_terms(b.field(), b.center_terms())},
                {"radius", b.radius().str()},
                {"closed", b.is_closed()},
                {"text", b.str()}};
}

/// Degree schedules for the type IV specs: an explicit comma list of
/// rationals, "harmonic" (1/i) or "geom2" (2^-i).
std::function<Rational(std::size_t)> schedule_fn(const std::string& text,
                                                 std::size_t needed) {
    if (text.empty() || text == "harmonic")
        return [](std::size_t i) { return Rational(1, static_cast<long>(i)); };
    if (text == "geom2")
        return [](std::size_t i) { return Rational(1, static_cast<long>(1) << i); };
    std::vector<Rational> vals;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        vals.push_back(grammar::parse_rational(text.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (vals.size() < needed)
        throw DomainError("schedule lists " + std::to_string(vals.size()) +
                          " values but " + std::to_string(needed) + " are needed");
    return [vals](std::size_t i) { return vals.at(i - 1); };
}

template <CoefficientField F>
Output cmd_expand(const F& fld, const Cmd& cmd) {
    Output out;
    auto value = build_value(fld, grammar::parse_expression(cmd.pos(0)));
    CFExpression<F>* cf_ptr = nullptr;
    std::string status;
    std::optional<CFExpression<F>> cf;
    if (std::holds_alternative<RationalPuiseux<F>>(value)) {
        cf = expand_exact(std::get<RationalPuiseux<F>>(value));
        status = "ended";
    } else {
        auto st = expand_stream(std::get<SeriesStream<F>>(value), cmd.max_terms,
                                grammar::parse_rational(cmd.cutoff));
        cf = st.expression();
        status = to_string(st.status);
        if (st.status != ExpandStatus::Ended) out.code = 2;
    }
    cf_ptr = &*cf;
    out.text = cf_ptr->str() + " (" + status + ")";
    out.j = cf_json(*cf_ptr, status);
    out.has_json = true;
    return out;
}

template <CoefficientField F>
Output cmd_eval(const F& fld, const Cmd& cmd) {
    auto cf = build_cf(fld, grammar::parse_cf(cmd.pos(0)));
    auto v = evaluate_exact(cf);
    return {0, v.str(), fraction_json(v), true};
}

template <CoefficientField F>
std::pair<CFExpression<F>, std::string> expansion_of(const F& fld, const Cmd& cmd,
                                                     const std::string& text) {
    if (!text.empty() && text.front() == '[') {
        return {build_cf(fld, grammar::parse_cf(text)), "ended"};
    }
    auto value = build_value(fld, grammar::parse_expression(text));
    if (std::holds_alternative<RationalPuiseux<F>>(value))
        return {expand_exact(std::get<RationalPuiseux<F>>(value)), "ended"};
    auto st = expand_stream(std::get<SeriesStream<F>>(value), cmd.max_terms,
                            grammar::parse_rational(cmd.cutoff));
    return {st.expression(), to_string(st.status)};
}

template <CoefficientField F>
Output cmd_approx(const F& fld, const Cmd& cmd) {
    Output out;
    auto [cf, status] = expansion_of(fld, cmd, cmd.pos(0));
    std::size_t n = cmd.n_set ? cmd.n : cf.total_quotients() - 1;
    if (n >= cf.total_quotients())
        throw DomainError("only " + std::to_string(cf.total_quotients()) +
                          " quotients available");
    auto aps = approximants(cf, n);
    json rows = json::array();
    std::ostringstream os;
    for (const auto& ap : aps) {
        if (cmd.format == "tsv") {
            os << ap.index << "\t" << ap.p.str() << "\t" << ap.q.str() << "\n";
        } else {
            os << "x_" << ap.index << " = (" << ap.p.str() << ") / (" << ap.q.str()
               << ")\n";
        }
        rows.push_back(json{{"n", ap.index}, {"p", ap.p.str()}, {"q", ap.q.str()}});
    }
    out.text = os.str();
    if (!out.text.empty() && out.text.back() == '\n') out.text.pop_back();
    out.j = json{{"approximants", rows}, {"status", status}};
    out.has_json = true;
    return out;
}

template <CoefficientField F>
Output cmd_error(const F& fld, const Cmd& cmd) {
    auto value = build_value(fld, grammar::parse_expression(cmd.pos(0)));
    if (!cmd.n_set) throw DomainError("error needs --n");
    Rational v = std::holds_alternative<RationalPuiseux<F>>(value)
                     ? error_valuation(std::get<RationalPuiseux<F>>(value), cmd.n)
                     : error_valuation(std::get<SeriesStream<F>>(value), cmd.n,
                                       grammar::parse_rational(cmd.cutoff));
    return {0, v.str(), json{{"n", cmd.n}, {"valuation", v.str()}}, true};
}

template <CoefficientField F>
Output cmd_best(const F& fld, const Cmd& cmd) {
    auto z = build_stream(fld, grammar::parse_expression(cmd.pos(0)));
    auto p = build_poly(fld, std::get<grammar::PolyLit>(grammar::parse_expression(cmd.p_arg)));
    auto q = build_poly(fld, std::get<grammar::PolyLit>(grammar::parse_expression(cmd.q_arg)));
    auto r = best_approximation_check(z, p, q, grammar::parse_rational(cmd.cutoff));
    std::string text =
        r.is_approximant ? "is-approximant(" + std::to_string(r.index) + ")" : "not-better";
    return {0, text,
            json{{"is_approximant", r.is_approximant}, {"index", r.index}}, true};
}

template <CoefficientField F>
Output cmd_period(const F& fld, const Cmd& cmd) {
    auto [cf, status] = expansion_of(fld, cmd, cmd.pos(0));
    std::optional<Rational> thr;
    if (!cmd.threshold.empty()) thr = grammar::parse_rational(cmd.threshold);
    auto res =
        detect_periodicity(cf, cmd.max_period, grammar::parse_rational(cmd.cutoff), thr);
    if (!res) return {0, "no periodicity found", json{{"found", false}}, true};
    std::ostringstream os;
    os << "preperiod " << res->preperiod << ", period " << res->period << ", "
       << (res->verified ? "verified" : "heuristic") << " (residual valuation "
       << (res->residual_term_seen ? "" : ">= ") << res->residual_floor.str() << ")\n";
    os << "quadratic: (" << res->A.str() << ")*z^2 + (" << res->B.str() << ")*z + ("
       << res->C.str() << ")";
    json j{{"found", true},
           {"preperiod", res->preperiod},
           {"period", res->period},
           {"verified", res->verified},
           {"residual_floor", res->residual_floor.str()},
           {"residual_exact", res->residual_term_seen},
           {"quadratic",
            json{{"a2", res->A.str()}, {"a1", res->B.str()}, {"a0", res->C.str()}}}};
    return {0, os.str(), j, true};
}

template <CoefficientField F>
Output cmd_berk_dist(const F& fld, const Cmd& cmd) {
    auto a = build_point(fld, grammar::parse_point(cmd.pos(0)));
    auto b = build_point(fld, grammar::parse_point(cmd.pos(1)));
    auto d = distance(a, b);
    return {0, d.str(), json{{"distance", d.str()}}, true};
}

template <CoefficientField F>
Output cmd_berk_join(const F& fld, const Cmd& cmd) {
    auto a = build_point(fld, grammar::parse_point(cmd.pos(0)));
    auto b = build_point(fld, grammar::parse_point(cmd.pos(1)));
    auto jp = join(a, b);
    return {0, jp.str(), point_json(jp), true};
}

template <CoefficientField F>
Output cmd_berk_act(const F& fld, const Cmd& cmd) {
    auto g = build_word(fld, grammar::parse_word(cmd.pos(0)));
    auto pt = build_point(fld, grammar::parse_point(cmd.pos(1)));
    auto img = g.act(pt);
    return {0, img.str(), point_json(img), true};
}

template <CoefficientField F>
Output cmd_reduce(const F& fld, const Cmd& cmd) {
    auto pt = build_point(fld, grammar::parse_point(cmd.pos(0)));
    auto red = reduce_to_ray(pt, cmd.budget);
    bool sound = red.witness.act(pt) == BerkPoint<F>(fld, {}, -red.v);
    std::string text = "v = " + red.v.str() + "\nwitness = " + red.witness.str() +
                       (sound ? "\nverified: act(witness, eta) = eta(0, " + (-red.v).str() + ")"
                              : "\nverification FAILED");
    return {sound ? 0 : 1, text,
            json{{"v", red.v.str()}, {"witness", red.witness.str()}, {"verified", sound}},
            true};
}

template <CoefficientField F>
Output cmd_promenade(const F& fld, const Cmd& cmd) {
    Output out;
    const std::string& spec = cmd.pos(0);
    Promenade prom{{}, PromenadeTail::AscendsForever};
    Rational t_max = grammar::parse_rational(cmd.t_max);
    if (spec.rfind("iva:", 0) == 0) {
        auto rest = spec.substr(4);
        auto colon = rest.find(':');
        std::string sched = colon == std::string::npos ? rest : rest.substr(0, colon);
        auto fn = schedule_fn(sched, cmd.max_terms);
        std::vector<Rational> degs;
        for (std::size_t i = 1; i <= cmd.max_terms; ++i) degs.push_back(fn(i));
        prom = promenade_from_degrees(degs, PromenadeTail::Accumulates, t_max);
    } else {
        auto [cf, status] = expansion_of(fld, cmd, spec);
        ExpandStatus st = ExpandStatus::Ended;
        if (status == "budget-exhausted") st = ExpandStatus::BudgetExhausted;
        if (status == "precision-exhausted") st = ExpandStatus::PrecisionExhausted;
        prom = promenade_of_expansion(cf, st, t_max);
    }
    std::ostringstream os;
    json bps = json::array();
    for (const auto& bp : prom.points) {
        os << bp.t.str() << "\t" << bp.v.str() << "\n";
        bps.push_back(json::array({bp.t.str(), bp.v.str()}));
    }
    os << "tail: " << to_string(prom.tail);
    out.text = os.str();
    out.j = json{{"breakpoints", bps}, {"tail", to_string(prom.tail)}};
    out.has_json = true;
    if (!cmd.svg_path.empty()) {
        std::ofstream f(cmd.svg_path);
        if (!f) throw DomainError("cannot write " + cmd.svg_path);
        f << svg::promenade_svg(prom);
        out.text += "\nsvg written to " + cmd.svg_path;
    }
    if (prom.tail == PromenadeTail::TruncatedAtBudget ||
        prom.tail == PromenadeTail::TruncatedAtPrecision)
        out.code = 2;
    return out;
}

template <CoefficientField F>
Output cmd_ball(const F& fld, const Cmd& cmd) {
    auto cf = build_cf(fld, grammar::parse_cf(cmd.pos(0)));
    auto b = ball_of_prefix(cf);
    return {0, b.str(), ball_json(b), true};
}

template <CoefficientField F>
Output cmd_prefix_rep(const F& fld, const Cmd& cmd) {
    auto b = build_ball(fld, grammar::parse_ball(cmd.pos(0)));
    auto rep = prefix_representation(b, cmd.budget);
    std::ostringstream os;
    json pj = json::array();
    os << "prefix = [";
    for (std::size_t i = 0; i < rep.prefix.size(); ++i) {
        if (i) os << (i == 1 ? "; " : ", ");
        os << rep.prefix[i].str();
        pj.push_back(rep.prefix[i].str());
    }
    os << "]\n";
    if (rep.f0_shift) os << "f0 shift = " << rep.f0_shift->str() << "\n";
    os << "D = " << rep.residual.str() << "\nword = " << rep.word.str();
    json j{{"prefix", pj},
           {"f0_shift", rep.f0_shift ? json(rep.f0_shift->str()) : json(nullptr)},
           {"D", ball_json(rep.residual)},
           {"word", rep.word.str()}};
    return {0, os.str(), j, true};
}

template <CoefficientField F>
Output cmd_typeiv(const F& fld, const Cmd& cmd) {
    const std::string& spec = cmd.pos(0);
    std::optional<NestedBallSeq<F>> seq;
    if (spec.rfind("e69", 0) == 0) {
        std::string sched = spec.size() > 3 && spec[3] == ':' ? spec.substr(4) : "";
        seq = e69_sequence(fld, schedule_fn(sched, cmd.count + 1), cmd.count);
    } else if (spec.rfind("iva:", 0) == 0) {
        auto rest = spec.substr(4);
        auto colon = rest.rfind(':');
        if (colon == std::string::npos) throw DomainError("iva spec: iva:<schedule>:<bound>");
        auto fn = schedule_fn(rest.substr(0, colon), cmd.count);
        Rational bound = grammar::parse_rational(rest.substr(colon + 1));
        seq = from_convergent_cf<F>(
            PuiseuxPoly<F>::zero(fld),
            [&](std::size_t i) { return PuiseuxPoly<F>::t_power(fld, fn(i)); }, bound,
            cmd.count);
    } else {
        throw DomainError("typeiv spec must be e69[:schedule] or iva:<schedule>:<bound>");
    }

    std::ostringstream os;
    json balls = json::array();
    os << "certificate: " << to_string(seq->certificate()) << "\n";
    if (seq->certificate() == TypeIVCertificate::E69Family)
        os << "character: type IVb (every radius parameter is negative, so the "
              "promenade never bounces)\n";
    for (std::size_t i = 0; i < seq->count(); ++i) {
        const auto& b = seq->ball(i);
        os << "  n=" << (i + 1) << "  center " << detail::render_terms(fld, b.center_terms())
           << "  radius " << b.radius().str() << "  nested ok\n";
        balls.push_back(json{{"n", i + 1},
                             {"center", detail::render_terms(fld, b.center_terms())},
                             {"radius", b.radius().str()},
                             {"nested", true}});
    }
    os << "radius limit: " << seq->radius_limit().str() << "\n";

    auto w = ivb_witness(*seq);
    json wj{{"stabilized", w.stabilized}};
    if (w.stabilized) {
        os << "witness: stabilized prefix of length " << w.prefix.size() << "\n";
        json pj = json::array();
        for (const auto& f : w.prefix) pj.push_back(f.str());
        wj["prefix"] = pj;
        json tails = json::array();
        for (const auto& d : w.tails) tails.push_back(ball_json(d));
        wj["tails"] = tails;
    } else {
        os << "witness: prefixes keep growing (type IVa data)\n";
    }

    json ex = json::array();
    for (const auto& e : cmd.excludes) {
        auto z = build_stream(fld, grammar::parse_expression(e));
        auto r = exclude_point(*seq, z, cmd.depth);
        os << "exclude " << e << ": "
           << (r.excluded ? "excluded-at(" + std::to_string(r.index) + ")" : "inconclusive")
           << "\n";
        ex.push_back(json{{"expr", e}, {"excluded", r.excluded}, {"index", r.index}});
    }

    std::string text = os.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    json j{{"certificate", to_string(seq->certificate())},
           {"balls", balls},
           {"radius_limit", seq->radius_limit().str()},
           {"witness", wj},
           {"exclusions", ex}};
    return {0, text, j, true};
}

template <CoefficientField F>
Output dispatch(const F& fld, const Cmd& cmd) {
    if (cmd.name == "expand") return cmd_expand(fld, cmd);
    if (cmd.name == "eval") return cmd_eval(fld, cmd);
    if (cmd.name == "approx") return cmd_approx(fld, cmd);
    if (cmd.name == "error") return cmd_error(fld, cmd);
    if (cmd.name == "best") return cmd_best(fld, cmd);
    if (cmd.name == "period") return cmd_period(fld, cmd);
    if (cmd.name == "berk-dist") return cmd_berk_dist(fld, cmd);
    if (cmd.name == "berk-join") return cmd_berk_join(fld, cmd);
    if (cmd.name == "berk-act") return cmd_berk_act(fld, cmd);
    if (cmd.name == "reduce") return cmd_reduce(fld, cmd);
    if (cmd.name == "promenade") return cmd_promenade(fld, cmd);
    if (cmd.name == "ball") return cmd_ball(fld, cmd);
    if (cmd.name == "prefix-rep") return cmd_prefix_rep(fld, cmd);
    if (cmd.name == "typeiv") return cmd_typeiv(fld, cmd);
    throw DomainError("unknown subcommand " + cmd.name);
}

}  // namespace

RunResult run(const std::vector<std::string>& args) {
    CLI::App app{"exact continued fractions over Puiseux polynomials"};
    app.require_subcommand(1);
    Cmd cmd;

    app.add_option("--field", cmd.field, "coefficient field: q or fp:<prime>")
        ->capture_default_str();
    app.add_option("--cutoff", cmd.cutoff, "precision cutoff (rational)")
        ->capture_default_str();
    app.add_option("--max-terms", cmd.max_terms, "partial-quotient budget")
        ->capture_default_str();
    app.add_option("--format", cmd.format, "text | json | tsv")->capture_default_str();

    struct Spec {
        const char* name;
        int positionals;
        const char* help;
    };
    const Spec specs[] = {
        {"expand", 1, "continued fraction expansion of an expression"},
        {"eval", 1, "exact value of a finite continued fraction"},
        {"approx", 1, "approximants p_n/q_n"},
        {"error", 1, "nu(z - p_n/q_n), two independent routes"},
        {"best", 1, "best-approximation check for p/q against z"},
        {"period", 1, "periodicity detection and verification"},
        {"berk-dist", 2, "hyperbolic distance between two points"},
        {"berk-join", 2, "join (lowest common ancestor) of two points"},
        {"berk-act", 2, "apply a group word to a point"},
        {"reduce", 1, "reduce a point to the modular ray with a witness"},
        {"promenade", 1, "projected trajectory of a descending geodesic"},
        {"ball", 1, "the ball of elements sharing a given expansion prefix"},
        {"prefix-rep", 1, "prefix representation of a closed ball"},
        {"typeiv", 1, "nested ball sequences with empty intersection"},
    };
    for (const auto& s : specs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        sub->add_option("arg1", cmd.pos0, "first argument")->required();
        if (s.positionals > 1)
            sub->add_option("arg2", cmd.pos1, "second argument")->required();
        sub->add_option("--n", cmd.n)->each([&cmd](const std::string&) { cmd.n_set = true; });
        sub->add_option("--p", cmd.p_arg);
        sub->add_option("--q", cmd.q_arg);
        sub->add_option("--max-period", cmd.max_period);
        sub->add_option("--threshold", cmd.threshold);
        sub->add_option("--t-max", cmd.t_max);
        sub->add_option("--count", cmd.count);
        sub->add_option("--depth", cmd.depth);
        sub->add_option("--exclude", cmd.excludes);
        sub->add_option("--budget", cmd.budget);
        sub->add_option("--svg", cmd.svg_path);
        sub->fallthrough();
    }

    try {
        try {
            app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
        } catch (const CLI::ParseError& e) {
            std::ostringstream os;
            if (e.get_exit_code() == 0) {  // --help
                os << app.help();
                return {0, os.str()};
            }
            return {1, std::string("error: ") + e.what()};
        }
        cmd.name = app.get_subcommands().front()->get_name();

        Output out;
        if (cmd.field == "q") {
            out = dispatch(QQ{}, cmd);
        } else if (cmd.field.rfind("fp:", 0) == 0) {
            out = dispatch(GF(std::stoul(cmd.field.substr(3))), cmd);
        } else {
            throw DomainError("unknown field " + cmd.field + " (use q or fp:<prime>)");
        }
        std::string text =
            cmd.format == "json" && out.has_json ? out.j.dump(2) : out.text;
        return {out.code, text};
    } catch (const PrecisionExhausted& e) {
        return {2, std::string("precision-exhausted: ") + e.what()};
    } catch (const BudgetExhausted& e) {
        return {2, std::string("budget-exhausted: ") + e.what()};
    } catch (const DomainError& e) {
        return {1, std::string("error: ") + e.what()};
    } catch (const Error& e) {
        return {1, std::string("error: ") + e.what()};
    }
}

int main_entry(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    auto res = run(args);
    std::cout << res.out << "\n";
    return res.code;
}

}  // namespace pcf::cli
