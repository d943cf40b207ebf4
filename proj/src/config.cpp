#include "twres/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace twres {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"field", {"p", "e", "eisenstein", "precision"}},
        {"pipeline", {"regime", "lambda", "k_max", "e_max", "depth", "b_window", "workers", "seed"}},
        {"output", {"format", "dir"}},
    };
    return keys;
}

template <class T>
T get(const pt::ptree& tree, const std::string& path, T fallback) {
    auto v = tree.get_optional<std::string>(path);
    if (!v) return fallback;
    std::istringstream is(*v);
    T out{};
    if (!(is >> out) || !(is >> std::ws).eof()) throw ConfigError(path + ": cannot parse '" + *v + "'");
    return out;
}

std::string get_str(const pt::ptree& tree, const std::string& path, const std::string& fallback) {
    auto v = tree.get_optional<std::string>(path);
    return v ? *v : fallback;
}

std::vector<long> parse_list(const std::string& path, const std::string& text) {
    std::vector<long> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        std::istringstream one(item);
        long v;
        if (!(one >> v) || !(one >> std::ws).eof()) throw ConfigError(path + ": cannot parse '" + text + "'");
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError(path + ": empty list");
    return out;
}

}  // namespace

FieldPtr RunConfig::make_field() const { return LocalField::make(p, e, eisenstein, precision); }

std::string RunConfig::to_ini(bool runtime) const {
    std::ostringstream os;
    os << "[field]\np = " << p << "\ne = " << e << "\neisenstein = ";
    for (std::size_t i = 0; i < eisenstein.size(); ++i) os << (i ? ", " : "") << eisenstein[i];
    os << "\nprecision = " << precision << "\n\n[pipeline]\nregime = " << (regime == Regime::Odd ? "odd" : "even")
       << "\nlambda = " << (lambda == LambdaChoice::Kutzko ? "kutzko" : "trivial") << "\nk_max = " << trunc.k_max
       << "\ne_max = " << trunc.e_max << "\ndepth = " << trunc.m << "\nb_window = " << trunc.b_window
       << "\n";
    if (runtime) os << "workers = " << trunc.workers << "\n";
    os << "seed = " << seed << "\n\n[output]\nformat = " << format << "\n";
    if (runtime) os << "dir = " << dir << "\n";
    return os.str();
}

RunConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
    }
    for (const auto& [section, body] : tree) {
        auto it = known_keys().find(section);
        if (it == known_keys().end()) throw ConfigError(section + ": unknown section");
        if (body.empty() && !body.data().empty()) throw ConfigError(section + ": key outside a section");
        for (const auto& [key, value] : body)
            if (!it->second.count(key)) throw ConfigError(section + "." + key + ": unknown key");
    }
    RunConfig c;
    c.p = get(tree, "field.p", c.p);
    c.e = get(tree, "field.e", c.e);
    if (auto v = tree.get_optional<std::string>("field.eisenstein")) {
        c.eisenstein = parse_list("field.eisenstein", *v);
    } else if (c.e != 1) {
        throw ConfigError("field.eisenstein: required when field.e != 1");
    } else {
        c.eisenstein = {-c.p, 1};
    }
    c.precision = get(tree, "field.precision", c.precision);
    auto regime = get_str(tree, "pipeline.regime", c.p == 2 ? "even" : "odd");
    if (regime == "odd") c.regime = Regime::Odd;
    else if (regime == "even") c.regime = Regime::Even;
    else throw ConfigError("pipeline.regime: expected odd or even, got '" + regime + "'");
    auto lambda = get_str(tree, "pipeline.lambda", "kutzko");
    if (lambda == "kutzko") c.lambda = LambdaChoice::Kutzko;
    else if (lambda == "trivial") c.lambda = LambdaChoice::Trivial;
    else throw ConfigError("pipeline.lambda: expected kutzko or trivial, got '" + lambda + "'");
    c.trunc.k_max = get(tree, "pipeline.k_max", c.trunc.k_max);
    c.trunc.e_max = get(tree, "pipeline.e_max", c.trunc.e_max);
    c.trunc.m = get(tree, "pipeline.depth", c.trunc.m);
    c.trunc.b_window = get(tree, "pipeline.b_window", c.trunc.e_max + 1);
    c.trunc.workers = get(tree, "pipeline.workers", c.trunc.workers);
    c.seed = get<std::uint64_t>(tree, "pipeline.seed", c.seed);
    c.format = get_str(tree, "output.format", c.format);
    c.dir = get_str(tree, "output.dir", c.dir);
    validate(c);
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open");
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

void validate(const RunConfig& c) {
    if (c.e < 1) throw ConfigError("field.e: must be >= 1");
    if (static_cast<int>(c.eisenstein.size()) != c.e + 1)
        throw ConfigError("field.eisenstein: expected e + 1 = " + std::to_string(c.e + 1) + " coefficients");
    if (c.precision < 1) throw ConfigError("field.precision: must be positive");
    if (c.regime == Regime::Even && (c.p != 2 || c.e < 2))
        throw ConfigError("pipeline.regime: even requires field.p = 2 and field.e >= 2");
    if (c.regime == Regime::Odd && c.p == 2) throw ConfigError("pipeline.regime: odd requires an odd field.p");
    auto check = [](bool ok, const char* key, const char* msg) {
        if (!ok) throw ConfigError(std::string(key) + ": " + msg);
    };
    check(c.trunc.k_max >= 0, "pipeline.k_max", "must be >= 0");
    check(c.trunc.e_max >= 1, "pipeline.e_max", "must be positive");
    check(c.trunc.m >= 1, "pipeline.depth", "must be positive");
    check(c.trunc.b_window >= 1, "pipeline.b_window", "must be positive");
    check(c.trunc.workers >= 1, "pipeline.workers", "must be positive");
    check(c.format == "csv" || c.format == "json", "output.format", "expected csv or json");
    try {
        c.make_field();
    } catch (const Error& e) {
        throw ConfigError(std::string("field: ") + e.what());
    }
}

std::string output_dir(const RunConfig& c) {
    if (const char* env = std::getenv("TWRES_OUTPUT_DIR")) return env;
    return c.dir;
}

}  // namespace twres
