#include "pinncert/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "pinncert/certify.hpp"
#include "pinncert/errors.hpp"
#include "pinncert/util.hpp"

namespace pinncert::cli {

namespace {

const std::map<std::string, std::set<std::string>>& config_schema() {
    static const std::map<std::string, std::set<std::string>> schema = {
        {"problem", {"example", "x1", "x2", "eps", "b", "c", "f", "p", "q", "k", "lambda"}},
        {"trial", {"kind", "hidden", "width"}},
        {"train", {"epochs", "n", "resample", "seed", "lr"}},
        {"sweep", {"param", "values", "jobs"}},
        {"output", {"dir", "emit_svg"}},
    };
    return schema;
}

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double_value(const std::string& text, const std::string& where) {
    const char* begin = text.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        throw ConfigError(where + ": expected a finite number, got '" + text + "'");
    return v;
}

long long parse_int_value(const std::string& text, const std::string& where) {
    const char* begin = text.c_str();
    char* end = nullptr;
    long long v = std::strtoll(begin, &end, 10);
    if (end == begin || *end != '\0')
        throw ConfigError(where + ": expected an integer, got '" + text + "'");
    return v;
}

bool parse_bool_value(const std::string& text, const std::string& where) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError(where + ": expected true/false, got '" + text + "'");
}

}  // namespace

class IniBuilder {
public:
    static IniFile build(const std::string& text, const std::string& origin) {
        IniFile ini;
        ini.origin_ = origin;
        std::string section;
        std::istringstream stream(text);
        std::string line;
        int lineno = 0;
        while (std::getline(stream, line)) {
            ++lineno;
            auto fail = [&](const std::string& msg) -> ConfigError {
                return ConfigError(origin + " line " + std::to_string(lineno) + ": " + msg);
            };
            strip_comment(line);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']') throw fail("unterminated section header");
                section = trim(line.substr(1, line.size() - 2));
                if (!config_schema().count(section))
                    throw fail("unknown section [" + section + "]");
                continue;
            }
            std::size_t eq = line.find('=');
            if (eq == std::string::npos) throw fail("expected key = value");
            if (section.empty()) throw fail("key outside any [section]");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) throw fail("empty key");
            if (!config_schema().at(section).count(key))
                throw fail("unknown key " + section + "." + key);
            if (value.size() >= 2 && value.front() == '"') {
                if (value.back() != '"') throw fail("unterminated quote");
                value = value.substr(1, value.size() - 2);
            }
            std::string path = section + "." + key;
            for (const auto& [k, v] : ini.entries_)
                if (k == path) throw fail("duplicate key " + path);
            ini.entries_.emplace_back(path, value);
        }
        return ini;
    }

private:
    // '#' and ';' start a comment unless inside double quotes
    static void strip_comment(std::string& line) {
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char ch = line[i];
            if (ch == '"') quoted = !quoted;
            if (!quoted && (ch == '#' || ch == ';')) {
                line.erase(i);
                return;
            }
        }
    }
};

IniFile IniFile::parse_text(const std::string& text, const std::string& origin) {
    return IniBuilder::build(text, origin);
}

IniFile IniFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_text(buf.str(), path);
}

bool IniFile::has(const std::string& section, const std::string& key) const {
    return get(section, key).has_value();
}

std::optional<std::string> IniFile::get(const std::string& section,
                                        const std::string& key) const {
    std::string path = section + "." + key;
    for (const auto& [k, v] : entries_)
        if (k == path) return v;
    return std::nullopt;
}

std::string IniFile::require(const std::string& section, const std::string& key) const {
    if (auto v = get(section, key)) return *v;
    throw ConfigError(origin_ + ": missing required key " + section + "." + key);
}

double IniFile::get_double(const std::string& section, const std::string& key,
                           double fallback) const {
    auto v = get(section, key);
    return v ? parse_double_value(*v, section + "." + key) : fallback;
}

int IniFile::get_int(const std::string& section, const std::string& key,
                     int fallback) const {
    auto v = get(section, key);
    return v ? static_cast<int>(parse_int_value(*v, section + "." + key)) : fallback;
}

bool IniFile::get_bool(const std::string& section, const std::string& key,
                       bool fallback) const {
    auto v = get(section, key);
    return v ? parse_bool_value(*v, section + "." + key) : fallback;
}

std::vector<double> parse_values(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw ConfigError("values: empty list");
    if (s.find(',') != std::string::npos || s.find(':') == std::string::npos) {
        std::vector<double> out;
        std::istringstream stream(s);
        std::string item;
        while (std::getline(stream, item, ','))
            out.push_back(parse_double_value(trim(item), "values"));
        if (out.empty()) throw ConfigError("values: empty list");
        return out;
    }
    std::vector<std::string> parts;
    std::istringstream stream(s);
    std::string item;
    while (std::getline(stream, item, ':')) parts.push_back(trim(item));
    if (parts.size() != 3)
        throw ConfigError("values: expected lo:hi:COUNT[lin|log] or a comma list, got '" +
                          s + "'");
    double lo = parse_double_value(parts[0], "values");
    double hi = parse_double_value(parts[1], "values");
    std::string count = parts[2];
    bool log_scale = false;
    if (count.size() > 3 && count.substr(count.size() - 3) == "log") {
        log_scale = true;
        count = count.substr(0, count.size() - 3);
    } else if (count.size() > 3 && count.substr(count.size() - 3) == "lin") {
        count = count.substr(0, count.size() - 3);
    }
    long long n = parse_int_value(count, "values");
    if (n < 2) throw ConfigError("values: range count must be >= 2");
    if (log_scale && (lo <= 0.0 || hi <= 0.0))
        throw ConfigError("values: log spacing needs positive endpoints");
    return log_scale ? logspace(lo, hi, static_cast<int>(n))
                     : linspace(lo, hi, static_cast<int>(n));
}

namespace {

struct Flags {
    std::string config, out, example, kind, checkpoint, param, values, family;
    std::optional<double> k, lambda, eps, lr;
    std::optional<int> epochs, n, hidden, width, m, jobs;
    std::optional<std::uint64_t> seed;
    bool untrained = false, emit_svg = false, resample = false;
};

using MaybeIni = std::optional<IniFile>;

Problem build_problem(const MaybeIni& ini, const Flags& fl) {
    std::string example = fl.example;
    if (example.empty() && ini)
        if (auto v = ini->get("problem", "example")) example = *v;

    if (!example.empty()) {
        Bindings params;
        if (ini)
            for (const char* key : {"eps", "k", "lambda"})
                if (auto v = ini->get("problem", key))
                    params[key] = parse_double_value(*v, std::string("problem.") + key);
        if (fl.eps) params["eps"] = *fl.eps;
        if (fl.k) params["k"] = *fl.k;
        if (fl.lambda) params["lambda"] = *fl.lambda;
        return registry_get(example, params);
    }

    if (!ini || !ini->has("problem", "b"))
        throw ConfigError(
            "no problem selected: pass --example NAME or a config [problem] section "
            "with x1,x2,eps,b,c,f,p,q");

    Bindings params;
    std::set<std::string> declared;
    for (const char* key : {"k", "lambda"})
        if (auto v = ini->get("problem", key)) {
            params[key] = parse_double_value(*v, std::string("problem.") + key);
            declared.insert(key);
        }
    if (fl.k) {
        params["k"] = *fl.k;
        declared.insert("k");
    }
    if (fl.lambda) {
        params["lambda"] = *fl.lambda;
        declared.insert("lambda");
    }

    double x1 = parse_double_value(ini->require("problem", "x1"), "problem.x1");
    double x2 = parse_double_value(ini->require("problem", "x2"), "problem.x2");
    double eps = fl.eps ? *fl.eps
                        : parse_double_value(ini->require("problem", "eps"), "problem.eps");
    double p = parse_double_value(ini->require("problem", "p"), "problem.p");
    double q = parse_double_value(ini->require("problem", "q"), "problem.q");
    Expr b = parse(ini->require("problem", "b"), declared);
    Expr c = parse(ini->require("problem", "c"), declared);
    Expr f = parse(ini->require("problem", "f"), declared);
    return make_problem(x1, x2, eps, b, c, f, p, q, params);
}

std::string resolve_kind(const MaybeIni& ini, const Flags& fl) {
    std::string kind = fl.kind;
    if (kind.empty() && ini)
        if (auto v = ini->get("trial", "kind")) kind = *v;
    if (kind.empty()) kind = "pinn2";
    if (kind != "pinn1" && kind != "pinn2" && kind != "exact")
        throw ConfigError("trial.kind: expected pinn1, pinn2 or exact, got '" + kind + "'");
    return kind;
}

int resolve_int(const std::optional<int>& flag, const MaybeIni& ini,
                const std::string& section, const std::string& key, int fallback,
                int min_value) {
    int v = flag ? *flag : (ini ? ini->get_int(section, key, fallback) : fallback);
    if (v < min_value)
        throw ConfigError(section + "." + key + ": must be >= " + std::to_string(min_value));
    return v;
}

TrainConfig resolve_train_config(const MaybeIni& ini, const Flags& fl) {
    TrainConfig cfg;
    cfg.epochs = resolve_int(fl.epochs, ini, "train", "epochs", cfg.epochs, 0);
    cfg.lr = fl.lr ? *fl.lr : (ini ? ini->get_double("train", "lr", cfg.lr) : cfg.lr);
    if (!(cfg.lr > 0.0)) throw ConfigError("train.lr: must be > 0");
    if (fl.seed)
        cfg.seed = *fl.seed;
    else if (ini)
        if (auto v = ini->get("train", "seed"))
            cfg.seed = static_cast<std::uint64_t>(parse_int_value(*v, "train.seed"));
    return cfg;
}

LossSpec resolve_loss_spec(const MaybeIni& ini, const Flags& fl) {
    LossSpec spec;
    spec.n = resolve_int(fl.n, ini, "train", "n", spec.n, 1);
    spec.resample =
        fl.resample || (ini ? ini->get_bool("train", "resample", false) : false);
    return spec;
}

std::unique_ptr<TrialFunction> make_trial(const std::string& kind, Network net,
                                          const Problem& prob) {
    if (kind == "pinn1") return std::make_unique<Pinn1Trial>(std::move(net));
    if (kind == "pinn2") return std::make_unique<Pinn2Trial>(std::move(net), prob);
    if (!prob.exact)
        throw ConfigError("trial.kind exact: problem '" + prob.name +
                          "' has no closed-form solution");
    return std::make_unique<AnalyticTrial>(prob.exact->formula);
}

std::filesystem::path resolve_out_dir(const MaybeIni& ini, const Flags& fl) {
    std::string dir = fl.out;
    if (dir.empty() && ini)
        if (auto v = ini->get("output", "dir")) dir = *v;
    if (dir.empty())
        if (const char* env = std::getenv("PINNCERT_OUT")) dir = env;
    if (dir.empty()) dir = ".";
    std::filesystem::create_directories(dir);
    return dir;
}

std::ofstream open_out_file(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

std::string describe_problem(const Problem& prob) {
    std::string s = prob.name;
    if (!prob.params.empty()) {
        s += " (";
        bool first = true;
        for (const auto& [k, v] : prob.params) {
            if (!first) s += ", ";
            s += k + "=" + format_double(v);
            first = false;
        }
        s += ")";
    }
    return s;
}

void print_report(std::ostream& os, const Problem& prob, const Report& rep) {
    os << "problem " << describe_problem(prob) << "\n";
    os << "n = " << rep.n << "  seed = " << rep.seed << "\n";
    os << "Error (sampled)   " << format_double(rep.error_sampled) << "  +/- "
       << format_double(rep.error_halfwidth_k5) << " (Chebyshev k=5)\n";
    os << "Loss (sampled)    " << format_double(rep.loss_sampled) << "  +/- "
       << format_double(rep.loss_halfwidth_k5) << " (Chebyshev k=5)\n";
    os << "BoundaryLoss      " << format_double(rep.boundary_loss) << "\n";
    os << "Error (integral)  " << format_double(rep.error_integral) << "\n";
    os << "Loss (integral)   " << format_double(rep.loss_integral) << "\n";
    os << "ratio             " << format_double(rep.ratio) << "\n";
    if (rep.reference_error > 0.0)
        os << "reference error   <= " << format_double(rep.reference_error) << "\n";

    auto line = [&](const char* name, bool applicable, double bound, bool pass,
                    const std::string& extra) {
        os << name;
        if (!applicable) {
            os << "not applicable\n";
            return;
        }
        os << "bound = " << format_double(bound) << extra << "  "
           << (pass ? "PASS" : "FAIL") << "\n";
    };
    line("plain     ", rep.plain_applicable, rep.bound_plain, rep.plain_pass, "");
    std::string loose;
    if (std::isfinite(rep.bound_weighted_loose))
        loose = " (loose " + format_double(rep.bound_weighted_loose) + ")";
    line("weighted  ", rep.weighted_applicable, rep.bound_weighted_tight,
         rep.weighted_pass, loose);
    line("energy    ", rep.energy_applicable, rep.bound_energy, rep.energy_pass, "");
}

void write_sweep_svg(std::ostream& os, const std::vector<SweepRecord>& records) {
    struct Series {
        const char* label;
        const char* color;
        std::vector<std::pair<double, double>> pts;
    };
    auto bound_of = [](const SweepRecord& r) {
        for (double v : {r.bound_plain, r.bound_weighted_tight, r.bound_energy})
            if (std::isfinite(v)) return v;
        return std::numeric_limits<double>::quiet_NaN();
    };
    Series series[4] = {{"loss", "#1f77b4", {}},
                        {"error", "#d62728", {}},
                        {"ratio", "#2ca02c", {}},
                        {"bound", "#9467bd", {}}};
    bool x_log = true;
    for (const SweepRecord& r : records) {
        if (!r.ok) continue;
        if (!(r.param_value > 0.0)) x_log = false;
        double ys[4] = {r.loss, r.error, r.ratio, bound_of(r)};
        for (int i = 0; i < 4; ++i)
            if (std::isfinite(ys[i]) && ys[i] > 0.0)
                series[i].pts.emplace_back(r.param_value, ys[i]);
    }

    double umin = 1e300, umax = -1e300, vmin = 1e300, vmax = -1e300;
    for (const Series& s : series)
        for (auto [x, y] : s.pts) {
            double u = x_log ? std::log10(x) : x;
            double v = std::log10(y);
            umin = std::min(umin, u);
            umax = std::max(umax, u);
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
    if (umin > umax) {
        umin = 0.0;
        umax = 1.0;
        vmin = 0.0;
        vmax = 1.0;
    }
    if (umax - umin < 1e-12) {
        umin -= 0.5;
        umax += 0.5;
    }
    if (vmax - vmin < 1e-12) {
        vmin -= 0.5;
        vmax += 0.5;
    }

    const double W = 720, H = 480, L = 70, T = 20, PW = 480, PH = 400;
    auto px = [&](double u) { return L + (u - umin) / (umax - umin) * PW; };
    auto py = [&](double v) { return T + (vmax - v) / (vmax - vmin) * PH; };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
       << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
    os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << PW << "\" height=\""
       << PH << "\" fill=\"none\" stroke=\"black\"/>\n";

    int dec_lo = static_cast<int>(std::ceil(vmin));
    int dec_hi = static_cast<int>(std::floor(vmax));
    int stride = std::max(1, (dec_hi - dec_lo) / 10 + ((dec_hi - dec_lo) % 10 ? 1 : 0));
    for (int d = dec_lo; d <= dec_hi; d += stride) {
        double y = py(d);
        os << "<line x1=\"" << L << "\" y1=\"" << num(y) << "\" x2=\"" << L + PW
           << "\" y2=\"" << num(y)
           << "\" stroke=\"#dddddd\" stroke-dasharray=\"3,3\"/>\n";
        os << "<text x=\"" << L - 6 << "\" y=\"" << num(y + 4)
           << "\" text-anchor=\"end\" font-size=\"11\">1e" << d << "</text>\n";
    }
    double x_lo = x_log ? std::pow(10.0, umin) : umin;
    double x_hi = x_log ? std::pow(10.0, umax) : umax;
    os << "<text x=\"" << L << "\" y=\"" << T + PH + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(x_lo)
       << "</text>\n";
    os << "<text x=\"" << L + PW << "\" y=\"" << T + PH + 16
       << "\" text-anchor=\"middle\" font-size=\"11\">" << format_double(x_hi)
       << "</text>\n";
    std::string xtitle = records.empty() ? std::string("parameter") : records[0].param_name;
    if (x_log) xtitle += " (log)";
    os << "<text x=\"" << L + PW / 2 << "\" y=\"" << T + PH + 38
       << "\" text-anchor=\"middle\" font-size=\"12\">" << xtitle << "</text>\n";
    os << "<text x=\"16\" y=\"" << T + PH / 2
       << "\" font-size=\"12\" transform=\"rotate(-90 16 " << T + PH / 2
       << ")\" text-anchor=\"middle\">value (log)</text>\n";

    double legend_y = T + 14;
    for (const Series& s : series) {
        if (s.pts.empty()) continue;
        os << "<polyline fill=\"none\" stroke=\"" << s.color
           << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.pts)
            os << num(px(x_log ? std::log10(x) : x)) << "," << num(py(std::log10(y)))
               << " ";
        os << "\"/>\n";
        os << "<line x1=\"" << L + PW + 14 << "\" y1=\"" << num(legend_y - 4)
           << "\" x2=\"" << L + PW + 38 << "\" y2=\"" << num(legend_y - 4)
           << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << L + PW + 44 << "\" y=\"" << num(legend_y)
           << "\" font-size=\"12\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    os << "</svg>\n";
}

int cmd_list_examples(std::ostream& out) {
    for (const std::string& name : registry_names()) out << name << "\n";
    return 0;
}

int cmd_train(const MaybeIni& ini, const Flags& fl, std::ostream& out) {
    Problem prob = build_problem(ini, fl);
    std::string kind = resolve_kind(ini, fl);
    if (kind == "exact") throw ConfigError("train: trial.kind exact has no parameters");
    int hidden = resolve_int(fl.hidden, ini, "trial", "hidden", 2, 1);
    int width = resolve_int(fl.width, ini, "trial", "width", 32, 1);
    TrainConfig cfg = resolve_train_config(ini, fl);
    LossSpec spec = resolve_loss_spec(ini, fl);
    std::filesystem::path dir = resolve_out_dir(ini, fl);

    auto trial = make_trial(kind, Network::init(cfg.seed, hidden, width), prob);
    TrainResult res = train(prob, *trial, spec, cfg);

    std::filesystem::path history_path = dir / "history.csv";
    {
        std::ofstream hist = open_out_file(history_path);
        bool with_error = !res.error_history.empty();
        hist << (with_error ? "epoch,loss,error\n" : "epoch,loss\n");
        for (std::size_t i = 0; i < res.loss_history.size(); ++i) {
            hist << (i + 1) << ',' << format_double(res.loss_history[i]);
            if (with_error) hist << ',' << format_double(res.error_history[i]);
            hist << '\n';
        }
    }
    std::filesystem::path ckpt_path =
        fl.checkpoint.empty() ? dir / "checkpoint.net" : std::filesystem::path(fl.checkpoint);
    trial->network()->save(ckpt_path.string());

    out << "problem " << describe_problem(prob) << "\n";
    out << "trained " << kind << " (hidden=" << hidden << ", width=" << width << ") for "
        << cfg.epochs << " epochs, n=" << spec.n << ", seed=" << cfg.seed << "\n";
    out << "initial loss " << format_double(res.initial_loss) << ", final loss "
        << format_double(res.loss_history.empty() ? res.initial_loss
                                                  : res.loss_history.back())
        << "\n";
    if (!res.error_history.empty())
        out << "final sampled error " << format_double(res.error_history.back()) << "\n";
    out << "wrote " << history_path.string() << "\n";
    out << "wrote " << ckpt_path.string() << "\n";
    return 0;
}

int cmd_verify(const MaybeIni& ini, const Flags& fl, std::ostream& out) {
    Problem prob = build_problem(ini, fl);
    std::string kind = resolve_kind(ini, fl);
    int hidden = resolve_int(fl.hidden, ini, "trial", "hidden", 2, 1);
    int width = resolve_int(fl.width, ini, "trial", "width", 32, 1);
    TrainConfig cfg = resolve_train_config(ini, fl);
    LossSpec spec = resolve_loss_spec(ini, fl);

    std::unique_ptr<TrialFunction> trial;
    if (kind == "exact") {
        trial = make_trial(kind, Network{}, prob);
    } else if (!fl.checkpoint.empty()) {
        trial = make_trial(kind, Network::load(fl.checkpoint), prob);
    } else if (fl.untrained) {
        trial = make_trial(kind, Network::init(cfg.seed, hidden, width), prob);
    } else {
        throw ConfigError("verify: pass --checkpoint FILE, --untrained, or --kind exact");
    }

    ReportOptions opt;
    if (!fl.family.empty()) {
        if (fl.family == "plain")
            opt.only_family = Family::kPlain;
        else if (fl.family == "weighted")
            opt.only_family = Family::kWeighted;
        else if (fl.family == "energy")
            opt.only_family = Family::kEnergy;
        else
            throw ConfigError("--family: expected plain, weighted or energy, got '" +
                              fl.family + "'");
    }

    SampleSet sample = SampleSet::draw(cfg.seed, spec.n, prob.x1, prob.x2);
    Report rep = certified_report(prob, *trial, sample, opt);
    print_report(out, prob, rep);
    return rep.all_pass() ? 0 : 2;
}

int cmd_sweep(const MaybeIni& ini, const Flags& fl, std::ostream& out) {
    Problem base = build_problem(ini, fl);
    SweepConfig cfg;
    cfg.param = fl.param;
    if (cfg.param.empty() && ini)
        if (auto v = ini->get("sweep", "param")) cfg.param = *v;
    if (cfg.param.empty()) throw ConfigError("sweep: missing sweep.param (--param)");
    std::string values = fl.values;
    if (values.empty() && ini)
        if (auto v = ini->get("sweep", "values")) values = *v;
    if (values.empty()) throw ConfigError("sweep: missing sweep.values (--values)");
    cfg.values = parse_values(values);
    cfg.train_cfg = resolve_train_config(ini, fl);
    cfg.loss_spec = resolve_loss_spec(ini, fl);
    cfg.hidden = resolve_int(fl.hidden, ini, "trial", "hidden", 2, 1);
    cfg.width = resolve_int(fl.width, ini, "trial", "width", 32, 1);
    cfg.jobs = resolve_int(fl.jobs, ini, "sweep", "jobs", 1, 1);

    std::filesystem::path dir = resolve_out_dir(ini, fl);
    std::vector<SweepRecord> records = sweep(base, cfg);

    std::filesystem::path csv_path = dir / "sweep.csv";
    {
        std::ofstream csv = open_out_file(csv_path);
        write_csv(csv, records);
    }
    out << "problem " << describe_problem(base) << "\n";
    out << "swept " << cfg.param << " over " << cfg.values.size() << " values\n";
    out << "wrote " << csv_path.string() << "\n";

    bool emit_svg =
        fl.emit_svg || (ini ? ini->get_bool("output", "emit_svg", false) : false);
    if (emit_svg) {
        std::filesystem::path svg_path = dir / "sweep.svg";
        std::ofstream svg = open_out_file(svg_path);
        write_sweep_svg(svg, records);
        out << "wrote " << svg_path.string() << "\n";
    }

    int failures = 0, uncertified = 0;
    for (const SweepRecord& r : records) {
        if (!r.ok) {
            ++failures;
            out << cfg.param << "=" << format_double(r.param_value) << " failed: "
                << r.message << "\n";
        } else if (!r.certified) {
            ++uncertified;
            out << cfg.param << "=" << format_double(r.param_value) << ": " << r.message
                << "\n";
        }
    }
    if (failures) return 1;
    return uncertified ? 2 : 0;
}

int cmd_fd(const MaybeIni& ini, const Flags& fl, std::ostream& out) {
    Problem prob = build_problem(ini, fl);
    int m = fl.m.value_or(2048);
    if (m < 8) throw ConfigError("--m: must be >= 8");
    std::filesystem::path dir = resolve_out_dir(ini, fl);

    FdSolution sol = fd_solve(prob, m);
    std::filesystem::path csv_path = dir / "fd.csv";
    {
        std::ofstream csv = open_out_file(csv_path);
        csv << "x,y\n";
        for (int i = 0; i <= sol.m; ++i)
            csv << format_double(sol.x1 + i * sol.h) << ',' << format_double(sol.y[i])
                << '\n';
    }
    out << "problem " << describe_problem(prob) << "\n";
    out << "m = " << sol.m << ", scheme = "
        << (sol.scheme == FdSolution::Scheme::kCentral ? "central" : "upwind")
        << ", mesh Peclet = " << format_double(sol.peclet) << "\n";
    out << "max scaled residual " << format_double(sol.max_scaled_residual) << "\n";
    if (prob.exact) {
        double worst = 0.0;
        for (int i = 0; i <= sol.m; ++i)
            worst = std::max(worst,
                             std::abs(sol.y[i] - prob.exact->eval(sol.x1 + i * sol.h)));
        out << "max nodal error vs closed form " << format_double(worst) << "\n";
    }
    out << "wrote " << csv_path.string() << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"train and certify neural trial solutions of -eps y'' + b y' + c y = f"};
    app.name("pinncert");
    app.require_subcommand(1);

    Flags fl;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", fl.config, "config file ([section] key = value)");
        sub->add_option("--out", fl.out, "output directory (default $PINNCERT_OUT or .)");
        sub->add_option("--example", fl.example, "registry problem name");
        sub->add_option("--k", fl.k, "problem parameter k");
        sub->add_option("--lambda", fl.lambda, "problem parameter lambda");
        sub->add_option("--eps", fl.eps, "diffusion coefficient eps");
        sub->add_option("--seed", fl.seed, "random seed");
    };
    auto add_trial = [&](CLI::App* sub) {
        sub->add_option("--kind", fl.kind, "trial kind: pinn1 | pinn2 | exact");
        sub->add_option("--hidden", fl.hidden, "hidden layer count");
        sub->add_option("--width", fl.width, "hidden layer width");
        sub->add_option("--n", fl.n, "collocation sample size");
    };
    auto add_train = [&](CLI::App* sub) {
        sub->add_option("--epochs", fl.epochs, "training epochs");
        sub->add_option("--lr", fl.lr, "optimizer step size");
        sub->add_flag("--resample", fl.resample, "fresh collocation sample each epoch");
    };

    CLI::App* sub_train = app.add_subcommand("train", "train a trial and write history + checkpoint");
    add_common(sub_train);
    add_trial(sub_train);
    add_train(sub_train);
    sub_train->add_option("--checkpoint", fl.checkpoint, "checkpoint output path");

    CLI::App* sub_verify = app.add_subcommand("verify", "report certified bounds for a trial");
    add_common(sub_verify);
    add_trial(sub_verify);
    sub_verify->add_option("--checkpoint", fl.checkpoint, "checkpoint to load");
    sub_verify->add_flag("--untrained", fl.untrained, "verify a freshly initialized network");
    sub_verify->add_option("--family", fl.family, "restrict to one bound family");

    CLI::App* sub_sweep = app.add_subcommand("sweep", "train across parameter values and write CSV");
    add_common(sub_sweep);
    add_trial(sub_sweep);
    add_train(sub_sweep);
    sub_sweep->add_option("--param", fl.param, "parameter to sweep");
    sub_sweep->add_option("--values", fl.values, "lo:hi:COUNT[lin|log] or comma list");
    sub_sweep->add_option("--jobs", fl.jobs, "worker threads");
    sub_sweep->add_flag("--emit-svg", fl.emit_svg, "also write a line chart");

    CLI::App* sub_fd = app.add_subcommand("fd", "finite-difference reference solve");
    add_common(sub_fd);
    sub_fd->add_option("--m", fl.m, "mesh cells");

    CLI::App* sub_list = app.add_subcommand("list-examples", "print registry problem names");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(std::move(rev));
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        MaybeIni ini;
        if (!fl.config.empty()) ini = IniFile::load(fl.config);
        if (*sub_list) return cmd_list_examples(out);
        if (*sub_train) return cmd_train(ini, fl, out);
        if (*sub_verify) return cmd_verify(ini, fl, out);
        if (*sub_sweep) return cmd_sweep(ini, fl, out);
        if (*sub_fd) return cmd_fd(ini, fl, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

int run(const std::vector<std::string>& args) {
    return run(args, std::cout, std::cerr);
}

}  // namespace pinncert::cli
