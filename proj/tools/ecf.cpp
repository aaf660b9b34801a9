// ecf: command-line front end for the Engel continued fraction library.

#include "ecf/acceptance.hpp"
#include "ecf/combinatorics.hpp"
#include "ecf/deviations.hpp"
#include "ecf/expansion.hpp"
#include "ecf/measure.hpp"
#include "ecf/montecarlo.hpp"
#include "ecf/numerics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace {

using json = nlohmann::ordered_json;
using namespace ecf;

#ifndef ECF_VERSION
#define ECF_VERSION "dev"
#endif

constexpr int kDigits = 40;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<json>> rows;
};

struct Output {
    json payload = json::object();
    Table table;
};

// ---- serialization helpers

json integer_json(const BigInt& v)
{
    if (v.fits_slong_p()) return v.get_si();
    return to_string(v);
}

json word_json(const DigitWord& w)
{
    json out = json::array();
    for (const auto& d : w) out.push_back(integer_json(d));
    return out;
}

std::string word_text(const DigitWord& w)
{
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ',';
        out += to_string(w[i]);
    }
    return out;
}

json rational_json(const Rational& q) { return to_string(q); }

json interval_json(const Interval& x)
{
    return json{{"lo", x.lower_decimal(kDigits)}, {"hi", x.upper_decimal(kDigits)}};
}

json extended_json(const ExtendedReal& x)
{
    if (x.is_infinite()) return json{{"lo", "+inf"}, {"hi", "+inf"}};
    return interval_json(x.value());
}

json prob_json(const ProbInterval& p) { return json{{"lo", to_string(p.lo)}, {"hi", to_string(p.hi)}}; }

std::string lo_text(const ExtendedReal& x) { return x.is_infinite() ? "+inf" : x.value().lower_decimal(kDigits); }
std::string hi_text(const ExtendedReal& x) { return x.is_infinite() ? "+inf" : x.value().upper_decimal(kDigits); }

// ---- parsing helpers

Rational parse_number(const std::string& text, const char* what)
{
    try {
        return parse_rational(text);
    } catch (const std::exception&) {
        throw UsageError(std::string("cannot parse ") + what + ": '" + text + "'");
    }
}

std::vector<std::string> split(const std::string& text, char sep)
{
    std::vector<std::string> parts;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, sep)) parts.push_back(item);
    return parts;
}

DigitWord parse_word(const std::string& text)
{
    std::vector<BigInt> digits;
    for (const auto& part : split(text, ',')) {
        Rational q = parse_number(part, "digit");
        if (q.get_den() != 1) throw UsageError("digits must be integers: '" + part + "'");
        digits.push_back(q.get_num());
    }
    if (!is_admissible(digits)) throw UsageError("digits must be positive and non-decreasing: " + text);
    return DigitWord(std::move(digits));
}

std::vector<std::uint64_t> parse_n_list(const std::string& text)
{
    std::vector<std::uint64_t> out;
    for (const auto& part : split(text, ',')) {
        try {
            std::size_t used = 0;
            unsigned long long v = std::stoull(part, &used);
            if (used != part.size() || v == 0) throw std::invalid_argument(part);
            out.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("cannot parse n list entry '" + part + "'");
        }
    }
    if (out.empty()) throw UsageError("empty n list");
    return out;
}

LastDigitMode parse_mode(const std::string& text)
{
    if (text == "exact") return LastDigitMode::Exact;
    if (text == "atmost" || text == "at-most" || text == "at_most") return LastDigitMode::AtMost;
    throw UsageError("mode must be exact or atmost");
}

// "b1>=2", "b3==4&b4>5"
DigitEvent parse_event(const std::string& text, std::uint64_t& depth)
{
    static const std::regex atom(R"(^\s*b(\d+)\s*(>=|<=|==|!=|>|<|=)\s*(\d+)\s*$)");
    struct Clause {
        std::size_t index;
        std::string op;
        BigInt value;
    };
    std::vector<Clause> clauses;
    depth = 0;
    for (const auto& part : split(text, '&')) {
        std::smatch m;
        if (!std::regex_match(part, m, atom)) throw UsageError("cannot parse event clause '" + part + "'");
        std::size_t index = std::stoul(m[1].str());
        if (index == 0) throw UsageError("digit indices start at 1");
        clauses.push_back({index, m[2].str(), BigInt(m[3].str())});
        depth = std::max<std::uint64_t>(depth, index);
    }
    if (clauses.empty()) throw UsageError("empty event");
    return [clauses](const DigitWord& w) {
        for (const auto& c : clauses) {
            const BigInt& d = w[c.index - 1];
            bool ok = (c.op == ">=") ? d >= c.value
                    : (c.op == "<=") ? d <= c.value
                    : (c.op == "==" || c.op == "=") ? d == c.value
                    : (c.op == "!=") ? d != c.value
                    : (c.op == ">") ? d > c.value
                                    : d < c.value;
            if (!ok) return false;
        }
        return true;
    };
}

// Round-trippable rendering of a double.
std::string exact_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string timestamp_utc()
{
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json manifest_for(const CLI::App& sub, const json& seed)
{
    json params = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
        if (opt->get_name() == "--help" || opt->get_lnames().empty()) continue;
        std::string key = opt->get_lnames().front();
        if (opt->get_type_size() == 0) {
            params[key] = opt->count() > 0;
        } else if (opt->count() > 0) {
            std::string joined;
            for (const auto& r : opt->results()) joined += (joined.empty() ? "" : ",") + r;
            params[key] = joined;
        } else if (!opt->get_default_str().empty()) {
            params[key] = opt->get_default_str();
        }
    }
    return json{{"command", sub.get_name()},
                {"params", params},
                {"seed", seed},
                {"precision", Interval::default_precision()},
                {"version", ECF_VERSION},
                {"timestamp", timestamp_utc()}};
}

std::string csv_cell(const json& v)
{
    std::string text = v.is_string() ? v.get<std::string>() : v.dump();
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char c : text) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    return quoted + "\"";
}

void write_output(std::ostream& out, const std::string& format, const Output& result, const json& manifest)
{
    if (format == "csv") {
        out << "# manifest " << manifest.dump() << '\n';
        for (std::size_t i = 0; i < result.table.columns.size(); ++i)
            out << (i ? "," : "") << result.table.columns[i];
        out << '\n';
        for (const auto& row : result.table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
            out << '\n';
        }
        return;
    }
    json doc = result.payload;
    doc["manifest"] = manifest;
    out << doc.dump(2) << '\n';
}

// ---- closed forms for the display of rate values

std::string closed_form_I(const Rational& x)
{
    const GoldenConstants g = golden_constants();
    if (x < -1) return "+inf";
    if (Interval(x).certainly_less(g.branch_point) || x == -1) {
        Rational shift = x + 1;
        if (shift == 0) return "2*log(phi)";
        return "-phi*(" + to_string(shift) + ") + 2*log(phi)";
    }
    if (x == 0) return "0";
    return to_string(x) + " - log(" + to_string(Rational(x + 1)) + ")";
}

} // namespace

int main(int argc, char** argv)
{
    if (const char* env = std::getenv("ECF_PRECISION_BITS"); env && *env) {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (*end != '\0' || bits < 32 || bits > 1 << 20) {
            std::cerr << "ECF_PRECISION_BITS must be an integer in [32, 1048576]\n";
            return 2;
        }
        Interval::set_default_precision(static_cast<mpfr_prec_t>(bits));
    }

    CLI::App app{"Engel continued fraction toolkit", "ecf"};
    app.require_subcommand(1);
    app.set_version_flag("--version", ECF_VERSION);
    std::string format = "json";
    std::string output_path;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--output,-o", output_path, "Write to a file instead of stdout");
    app.fallthrough();

    Output result;
    json seed = nullptr;
    std::function<void()> action;

    // expand
    auto* expand = app.add_subcommand("expand", "ECF digits of a rational in (0, 1]");
    std::string x_text;
    std::size_t max_digits = 64;
    expand->add_option("--x", x_text, "p/q or decimal")->required();
    expand->add_option("--max-digits", max_digits)->capture_default_str();
    expand->callback([&] {
        action = [&] {
            Rational x = parse_number(x_text, "--x");
            if (x <= 0 || x > 1) throw UsageError("--x must lie in (0, 1]");
            auto e = expand_rational(x, max_digits);
            result.payload["digits"] = word_json(e.digits);
            result.payload["truncated"] = e.truncated;
            result.table.columns = {"index", "digit"};
            for (std::size_t i = 0; i < e.digits.size(); ++i)
                result.table.rows.push_back({i + 1, to_string(e.digits[i])});
        };
    });

    // reconstruct
    auto* recon = app.add_subcommand("reconstruct", "Value of a finite digit word");
    std::string digits_text;
    recon->add_option("--digits", digits_text, "Comma-separated digits")->required();
    recon->callback([&] {
        action = [&] {
            DigitWord w = parse_word(digits_text);
            Rational v = reconstruct(w);
            result.payload["digits"] = word_json(w);
            result.payload["value"] = rational_json(v);
            result.table.columns = {"digits", "value"};
            result.table.rows.push_back({word_text(w), to_string(v)});
        };
    });

    // cylinder
    auto* cyl = app.add_subcommand("cylinder", "Endpoints and measure of a cylinder set");
    cyl->add_option("--digits", digits_text, "Comma-separated digits")->required();
    cyl->callback([&] {
        action = [&] {
            DigitWord w = parse_word(digits_text);
            if (w.empty()) throw UsageError("--digits must be non-empty");
            auto [lo, hi] = cylinder_endpoints(w);
            Rational m = cylinder_measure(w);
            result.payload["digits"] = word_json(w);
            result.payload["endpoints"] = json{{"lo", to_string(lo)}, {"hi", to_string(hi)}};
            result.payload["measure"] = rational_json(m);
            result.table.columns = {"digits", "lo", "hi", "measure"};
            result.table.rows.push_back({word_text(w), to_string(lo), to_string(hi), to_string(m)});
        };
    });

    // count / enumerate
    std::uint64_t n = 0;
    std::uint64_t m = 0;
    std::string mode_text = "exact";
    std::uint64_t budget = kDefaultWordBudget;
    auto* count = app.add_subcommand("count", "Number of admissible words by last digit");
    count->add_option("--n", n)->required();
    count->add_option("--m", m)->required();
    count->add_option("--mode", mode_text, "exact or atmost")->capture_default_str();
    count->callback([&] {
        action = [&] {
            if (n == 0 || m == 0) throw UsageError("--n and --m must be positive");
            BigInt c = count_words({n, m, parse_mode(mode_text)});
            result.payload["count"] = integer_json(c);
            result.table.columns = {"n", "m", "mode", "count"};
            result.table.rows.push_back({n, m, mode_text, to_string(c)});
        };
    });

    std::uint64_t limit = 1000;
    auto* enumerate = app.add_subcommand("enumerate", "List admissible words in lexicographic order");
    enumerate->add_option("--n", n)->required();
    enumerate->add_option("--m", m)->required();
    enumerate->add_option("--mode", mode_text, "exact or atmost")->capture_default_str();
    enumerate->add_option("--limit", limit, "Words printed at most")->capture_default_str();
    enumerate->add_option("--budget", budget, "Refuse families larger than this")->capture_default_str();
    enumerate->callback([&] {
        action = [&] {
            if (n == 0 || m == 0) throw UsageError("--n and --m must be positive");
            WordStream stream({n, m, parse_mode(mode_text)}, budget);
            json words = json::array();
            result.table.columns = {"index", "word"};
            std::uint64_t shown = 0;
            while (shown < limit) {
                auto w = stream.next();
                if (!w) break;
                ++shown;
                words.push_back(word_json(*w));
                result.table.rows.push_back({shown, word_text(*w)});
            }
            result.payload["count"] = integer_json(stream.count());
            result.payload["limited"] = stream.count() > shown;
            result.payload["words"] = std::move(words);
        };
    });

    // marginal
    std::uint64_t cap = 60;
    bool exact_flag = false;
    bool interval_flag = false;
    auto* marginal = app.add_subcommand("marginal", "Law of the n-th digit on {1..cap}");
    marginal->add_option("--n", n)->required();
    marginal->add_option("--cap", cap)->capture_default_str();
    marginal->add_flag("--exact", exact_flag, "Sum every cylinder (exact rationals)");
    marginal->add_flag("--interval", interval_flag, "Transition sandwich enclosure (default)");
    marginal->add_option("--budget", budget)->capture_default_str();
    marginal->callback([&] {
        action = [&] {
            if (exact_flag && interval_flag) throw UsageError("--exact and --interval are exclusive");
            if (n == 0 || cap == 0) throw UsageError("--n and --cap must be positive");
            MarginalTable t = exact_flag ? marginal_exact(n, cap, budget) : marginal_interval_dp(n, cap);
            result.payload["method"] = exact_flag ? "exact" : "interval";
            json rows = json::array();
            result.table.columns = {"k", "lo", "hi"};
            for (std::size_t k = 0; k < t.entries.size(); ++k) {
                rows.push_back(json{{"k", k + 1}, {"p", prob_json(t.entries[k])}});
                result.table.rows.push_back({k + 1, to_string(t.entries[k].lo), to_string(t.entries[k].hi)});
            }
            result.payload["rows"] = std::move(rows);
            result.payload["tail"] = prob_json(t.tail);
            result.table.rows.push_back({">" + std::to_string(cap), to_string(t.tail.lo), to_string(t.tail.hi)});
            if (exact_flag) result.payload["cylinders"] = integer_json(t.cylinders_visited);
        };
    });

    // conditional
    std::string prefix_text;
    std::uint64_t next_digit = 0;
    std::uint64_t given_last = 0;
    auto* cond = app.add_subcommand("conditional", "Conditional law of the next digit");
    auto* prefix_opt = cond->add_option("--prefix", prefix_text, "Digits of the conditioning prefix");
    cond->add_option("--next", next_digit, "Next digit k")->required();
    auto* last_opt = cond->add_option("--given-last", given_last, "Condition on b_{n-1} = j only");
    cond->add_option("--n", n, "Position of the next digit (with --given-last)");
    cond->add_option("--budget", budget)->capture_default_str();
    prefix_opt->excludes(last_opt);
    cond->callback([&] {
        action = [&] {
            Rational p;
            if (!prefix_text.empty()) {
                DigitWord w = parse_word(prefix_text);
                if (w.empty() || next_digit < 1) throw UsageError("need a non-empty prefix and --next >= 1");
                p = conditional_probability(w, BigInt(static_cast<unsigned long>(next_digit)));
                result.payload["prefix"] = word_json(w);
            } else if (given_last > 0) {
                if (n < 2) throw UsageError("--given-last needs --n >= 2");
                p = conditional_given_last(n, given_last, next_digit, budget);
                result.payload["n"] = n;
                result.payload["given_last"] = given_last;
            } else {
                throw UsageError("conditional needs --prefix or --given-last");
            }
            result.payload["next"] = next_digit;
            result.payload["probability"] = rational_json(p);
            result.table.columns = {"next", "probability"};
            result.table.rows.push_back({next_digit, to_string(p)});
        };
    });

    // moment
    std::string theta_text;
    std::uint64_t clusters = MomentOptions{}.clusters;
    auto* moment = app.add_subcommand("moment", "Enclosure of E(b_n^theta)");
    moment->add_option("--n", n)->required();
    moment->add_option("--theta", theta_text)->required();
    moment->add_option("--cap", cap)->capture_default_str();
    moment->add_option("--clusters", clusters)->capture_default_str();
    moment->callback([&] {
        action = [&] {
            if (n == 0) throw UsageError("--n must be positive");
            Rational theta = parse_number(theta_text, "--theta");
            MomentOptions opt{cap, clusters, Interval::default_precision()};
            ExtendedReal e = moment_interval(n, theta, opt);
            ExtendedReal growth = ExtendedReal::infinity();
            if (e.is_finite()) growth = ExtendedReal(log(e.value()) / Interval(static_cast<long>(n)));
            ExtendedReal lim = moment_limit(Interval(theta));
            result.payload["theta"] = rational_json(theta);
            result.payload["moment"] = extended_json(e);
            result.payload["growth"] = extended_json(growth);
            result.payload["limit"] = extended_json(lim);
            result.table.columns = {"n", "theta", "moment_lo", "moment_hi", "growth_lo", "growth_hi"};
            result.table.rows.push_back({n, to_string(theta), lo_text(e), hi_text(e), lo_text(growth), hi_text(growth)});
        };
    });

    // growth
    std::string n_list_text;
    auto* growth = app.add_subcommand("growth", "(1/n) log E(b_n^theta) along a list of n");
    growth->add_option("--theta", theta_text)->required();
    growth->add_option("--n-list", n_list_text, "Comma-separated n values")->required();
    growth->add_option("--cap", cap)->capture_default_str();
    growth->add_option("--clusters", clusters)->capture_default_str();
    growth->callback([&] {
        action = [&] {
            Rational theta = parse_number(theta_text, "--theta");
            MomentOptions opt{cap, clusters, Interval::default_precision()};
            auto rows = moment_growth_rate(theta, parse_n_list(n_list_text), opt);
            json out = json::array();
            result.table.columns = {"n", "lo", "hi"};
            for (const auto& r : rows) {
                out.push_back(json{{"n", r.n}, {"value", extended_json(r.value)}});
                result.table.rows.push_back({r.n, lo_text(r.value), hi_text(r.value)});
            }
            result.payload["theta"] = rational_json(theta);
            result.payload["rows"] = std::move(out);
            result.payload["limit"] = extended_json(moment_limit(Interval(theta)));
        };
    });

    // pressure
    auto* press = app.add_subcommand("pressure", "Pressure function Lambda(theta)");
    press->add_option("--theta", theta_text)->required();
    press->callback([&] {
        action = [&] {
            Rational theta = parse_number(theta_text, "--theta");
            ExtendedReal v = pressure(Interval(theta));
            result.payload["theta"] = rational_json(theta);
            result.payload["value"] = extended_json(v);
            if (v.is_finite()) result.payload["decimal"] = v.value().to_decimal(kDigits);
            result.table.columns = {"theta", "lo", "hi"};
            result.table.rows.push_back({to_string(theta), lo_text(v), hi_text(v)});
        };
    });

    // rate
    std::string which = "I";
    std::string b_text = "1";
    auto* rate_cmd = app.add_subcommand("rate", "Large deviation rate functions");
    rate_cmd->add_option("--which", which, "I, Ib, Iinf or J")
        ->check(CLI::IsMember({"I", "Ib", "Iinf", "J"}))
        ->capture_default_str();
    rate_cmd->add_option("--x", x_text)->required();
    rate_cmd->add_option("--b", b_text, "Digit bound for Ib")->capture_default_str();
    rate_cmd->callback([&] {
        action = [&] {
            Rational x = parse_number(x_text, "--x");
            Rational b = parse_number(b_text, "--b");
            if (b.get_den() != 1 || b < 1) throw UsageError("--b must be a positive integer");
            RateFunctionId id = parse_rate_id(which, b.get_num());
            ExtendedReal v = rate(id, Interval(x));
            result.payload["which"] = which;
            result.payload["x"] = rational_json(x);
            if (id.kind == RateKind::J) {
                result.payload["exact"] = rational_json(Rational(x * x / 2));
            } else if (id.kind == RateKind::I) {
                result.payload["closed_form"] = closed_form_I(x);
            }
            result.payload["value"] = extended_json(v);
            if (v.is_finite() && id.kind != RateKind::J) result.payload["decimal"] = v.value().to_decimal(kDigits);
            result.table.columns = {"which", "x", "lo", "hi"};
            if (id.kind == RateKind::J) {
                std::string e = to_string(Rational(x * x / 2));
                result.table.rows.push_back({which, to_string(x), e, e});
            } else {
                result.table.rows.push_back({which, to_string(x), lo_text(v), hi_text(v)});
            }
        };
    });

    // legendre
    std::string legendre_of = "Lambda";
    double bracket_lo = -50.0;
    double bracket_hi = 1.0 - 1e-12;
    auto* leg = app.add_subcommand("legendre", "Numerical Legendre transform sup_theta {theta x - f(theta)}");
    leg->add_option("--x", x_text)->required();
    leg->add_option("--of", legendre_of, "Lambda, engel or modified")
        ->check(CLI::IsMember({"Lambda", "engel", "modified"}))
        ->capture_default_str();
    leg->add_option("--lo", bracket_lo)->default_str(exact_double(bracket_lo));
    leg->add_option("--hi", bracket_hi)->default_str(exact_double(bracket_hi));
    leg->callback([&] {
        action = [&] {
            Rational x = parse_number(x_text, "--x");
            if (!(bracket_lo < bracket_hi)) throw UsageError("--lo must be below --hi");
            RateFunctionId id = parse_rate_id(legendre_of);
            LegendreResult r = legendre_numeric([&](const Interval& t) { return rate(id, t); }, x, bracket_lo,
                                                bracket_hi);
            ExtendedReal closed = rate(RateFunctionId{RateKind::I, 1}, Interval(x));
            result.payload["of"] = legendre_of;
            result.payload["x"] = rational_json(x);
            result.payload["value"] = extended_json(r.value);
            result.payload["maximizer"] = r.maximizer;
            result.payload["closed_form_I"] = extended_json(closed);
            result.table.columns = {"x", "lo", "hi", "maximizer"};
            result.table.rows.push_back({to_string(x), lo_text(r.value), hi_text(r.value), r.maximizer});
        };
    });

    // mdp
    std::string lambda_text;
    std::string p_text = "3/4";
    auto* mdp = app.add_subcommand("mdp", "Moderate deviation curve with a_n = n^p");
    mdp->add_option("--lambda", lambda_text)->required();
    mdp->add_option("--p", p_text, "Exponent in (1/2, 1)")->capture_default_str();
    mdp->add_option("--n-list", n_list_text)->required();
    mdp->add_option("--cap", cap)->capture_default_str();
    mdp->add_option("--clusters", clusters)->capture_default_str();
    mdp->callback([&] {
        action = [&] {
            Rational lambda = parse_number(lambda_text, "--lambda");
            Rational p = parse_number(p_text, "--p");
            if (lambda == 0) throw UsageError("--lambda must be nonzero");
            if (p <= Rational(1, 2) || p >= 1) throw UsageError("--p must lie in (1/2, 1)");
            MomentOptions opt{cap, clusters, Interval::default_precision()};
            auto rows = mdp_curve(lambda, parse_n_list(n_list_text), power_scaling(p), opt);
            json out = json::array();
            result.table.columns = {"n", "theta", "feasible", "lo", "hi"};
            for (const auto& r : rows) {
                out.push_back(json{{"n", r.n},
                                   {"theta", rational_json(r.theta)},
                                   {"a_n", interval_json(r.a_n)},
                                   {"speed", interval_json(r.speed)},
                                   {"feasible", r.feasible},
                                   {"value", extended_json(r.value)}});
                result.table.rows.push_back({r.n, to_string(r.theta), r.feasible, lo_text(r.value), hi_text(r.value)});
            }
            result.payload["lambda"] = rational_json(lambda);
            result.payload["p"] = rational_json(p);
            result.payload["target"] = rational_json(Rational(lambda * lambda / 2));
            result.payload["rows"] = std::move(out);
        };
    });

    // mc
    std::string task = "lln";
    SampleConfig config;
    std::string eps_text;
    std::string tail_text = "lower";
    std::string event_text = "b1>=2";
    double level = 0.99;
    n = 10;
    auto* mc = app.add_subcommand("mc", "Monte Carlo on certified dyadic samples");
    mc->add_option("--task", task)->check(CLI::IsMember({"lln", "clt", "ldp", "event"}))->capture_default_str();
    mc->add_option("--seed", config.seed)->capture_default_str();
    mc->add_option("--trials", config.trials)->capture_default_str();
    mc->add_option("--bits", config.bits, "Dyadic precision; 0 picks a default from n")->capture_default_str();
    mc->add_option("--n", n)->capture_default_str();
    mc->add_option("--n-list", n_list_text, "Depths for the ldp task");
    mc->add_option("--eps", eps_text);
    mc->add_option("--tail", tail_text)->check(CLI::IsMember({"upper", "lower"}))->capture_default_str();
    mc->add_option("--event", event_text, "Clauses like b1>=2 joined by &")->capture_default_str();
    mc->add_option("--level", level, "Confidence level")->capture_default_str();
    mc->add_option("--workers", config.workers, "Threads; 0 uses every core")->capture_default_str();
    mc->callback([&] {
        seed = config.seed;
        action = [&] {
            if (config.trials == 0 || n == 0) throw UsageError("--trials and --n must be positive");
            if (!(level > 0.0 && level < 1.0)) throw UsageError("--level must lie in (0, 1)");
            config.depth = n;
            result.payload["task"] = task;
            result.payload["rng"] = kRngName;
            if (task == "event") {
                std::uint64_t depth = 0;
                DigitEvent ev = parse_event(event_text, depth);
                config.depth = std::max(depth, n);
                EventEstimate est = estimate_event(config, ev);
                est = make_estimate(est.hits, est.trials, est.uncertified, level);
                result.payload["event"] = event_text;
                result.payload["bits"] = config.effective_bits();
                result.payload["hits"] = est.hits;
                result.payload["trials"] = est.trials;
                result.payload["uncertified"] = est.uncertified;
                result.payload["p_hat"] = rational_json(est.p_hat);
                result.payload["ci"] = json{{"lo", est.ci.lo}, {"hi", est.ci.hi}};
                result.table.columns = {"event", "hits", "trials", "uncertified", "p_hat", "ci_lo", "ci_hi"};
                result.table.rows.push_back({event_text, est.hits, est.trials, est.uncertified,
                                             to_string(est.p_hat), est.ci.lo, est.ci.hi});
            } else if (task == "lln") {
                LlnReport r = lln_report(config);
                result.payload["n"] = r.n;
                result.payload["bits"] = config.effective_bits();
                result.payload["certified"] = r.certified;
                result.payload["uncertified"] = r.uncertified;
                result.payload["mean"] = r.mean;
                result.payload["sd"] = r.sd;
                result.table.columns = {"n", "certified", "uncertified", "mean", "sd"};
                result.table.rows.push_back({r.n, r.certified, r.uncertified, r.mean, r.sd});
            } else if (task == "clt") {
                CltReport r = clt_report(config);
                result.payload["n"] = r.n;
                result.payload["bits"] = config.effective_bits();
                result.payload["certified"] = r.certified;
                result.payload["uncertified"] = r.uncertified;
                result.payload["ks"] = r.ks;
                result.payload["median"] = r.median;
                json q = json::array();
                result.table.columns = {"level", "empirical", "normal"};
                for (const auto& row : r.quantiles) {
                    q.push_back(json{{"level", row.level}, {"empirical", row.empirical}, {"normal", row.normal}});
                    result.table.rows.push_back({row.level, row.empirical, row.normal});
                }
                result.payload["quantiles"] = std::move(q);
            } else {
                if (eps_text.empty()) throw UsageError("--task ldp needs --eps");
                Rational eps = parse_number(eps_text, "--eps");
                if (eps <= 0) throw UsageError("--eps must be positive");
                std::vector<std::uint64_t> n_list = n_list_text.empty() ? std::vector<std::uint64_t>{n}
                                                                        : parse_n_list(n_list_text);
                Tail tail = tail_text == "upper" ? Tail::Upper : Tail::Lower;
                LdpReport r = ldp_slope(eps, tail, n_list, config);
                json rows = json::array();
                result.table.columns = {"n", "hits", "trials", "p_hat", "rate_hat", "rate_lo", "rate_hi"};
                for (const auto& row : r.rows) {
                    json hi = std::isfinite(row.rate_hi) ? json(row.rate_hi) : json("+inf");
                    json hat = std::isfinite(row.rate_hat) ? json(row.rate_hat) : json("+inf");
                    rows.push_back(json{{"n", row.n},
                                        {"hits", row.estimate.hits},
                                        {"trials", row.estimate.trials},
                                        {"uncertified", row.estimate.uncertified},
                                        {"p_hat", rational_json(row.estimate.p_hat)},
                                        {"rate_hat", hat},
                                        {"rate_lo", row.rate_lo},
                                        {"rate_hi", hi}});
                    result.table.rows.push_back({row.n, row.estimate.hits, row.estimate.trials,
                                                 to_string(row.estimate.p_hat), hat, row.rate_lo, hi});
                }
                result.payload["eps"] = rational_json(eps);
                result.payload["tail"] = tail_text;
                result.payload["rows"] = std::move(rows);
                result.payload["slope"] = r.slope;
                result.payload["intercept"] = r.intercept;
                result.payload["fitted_rows"] = r.fitted_rows;
            }
        };
    });

    // verify
    std::string suite_text = "quick";
    std::string items_text;
    auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
    verify->add_option("--suite", suite_text)->check(CLI::IsMember({"quick", "full"}))->capture_default_str();
    verify->add_option("--items", items_text, "Comma-separated criterion ids (overrides --suite)");
    verify->callback([&] {
        action = [&] {
            std::vector<acceptance::CriterionResult> results;
            auto report = [](const acceptance::CriterionResult& r) {
                std::cerr << acceptance::format_result(r) << std::endl;
            };
            if (!items_text.empty()) {
                for (std::uint64_t id : parse_n_list(items_text)) {
                    if (id > 14) throw UsageError("criterion ids run from 1 to 14");
                    results.push_back(acceptance::run_criterion(static_cast<int>(id)));
                    report(results.back());
                }
            } else {
                auto suite = suite_text == "full" ? acceptance::Suite::Full : acceptance::Suite::Quick;
                results = acceptance::run_suite(suite, report);
            }
            json rows = json::array();
            result.table.columns = {"id", "title", "passed", "seconds", "detail"};
            const acceptance::CriterionResult* first_failure = nullptr;
            for (const auto& r : results) {
                rows.push_back(json{{"id", r.id},
                                    {"title", r.title},
                                    {"passed", r.passed},
                                    {"seconds", r.seconds},
                                    {"detail", r.detail}});
                result.table.rows.push_back({r.id, r.title, r.passed, r.seconds, r.detail});
                if (!r.passed && !first_failure) first_failure = &r;
            }
            result.payload["suite"] = items_text.empty() ? suite_text : "items";
            result.payload["passed"] = first_failure == nullptr;
            result.payload["results"] = std::move(rows);
            if (first_failure)
                result.payload["first_failure"] = json{{"id", first_failure->id}, {"title", first_failure->title}};
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        action();
        const CLI::App* sub = app.get_subcommands().front();
        json manifest = manifest_for(*sub, seed);
        if (output_path.empty()) {
            write_output(std::cout, format, result, manifest);
        } else {
            std::ofstream file(output_path);
            if (!file) throw std::runtime_error("cannot open " + output_path);
            write_output(file, format, result, manifest);
        }
        if (result.payload.contains("first_failure")) {
            const auto& f = result.payload["first_failure"];
            std::cerr << "verification failed at item " << f["id"].get<int>() << ": "
                      << f["title"].get<std::string>() << '\n';
            return 4;
        }
        return 0;
    } catch (const BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << to_string(e.count()) << " words (budget " << e.budget() << ")\n";
        return 3;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
