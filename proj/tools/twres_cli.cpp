#include "twres/acceptance.hpp"
#include "twres/commands.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace twres;

namespace {

// Writes to <dir>/<stem>.<ext> when an output directory is configured, else to stdout.
void emit(const RunConfig& c, const std::string& stem, const std::string& ext, const std::string& text) {
    const std::string dir = output_dir(c);
    if (dir.empty()) {
        std::cout << text;
        return;
    }
    std::filesystem::create_directories(dir);
    const auto path = std::filesystem::path(dir) / (stem + "." + ext);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("output.dir: cannot write " + path.string());
    out << text;
    std::cerr << "wrote " << path.string() << "\n";
}

void emit_table(const RunConfig& c, const std::string& stem, const Table& t) {
    emit(c, stem, c.format == "json" ? "json" : "csv", t.render(c.format));
}

void emit_json(const RunConfig& c, const std::string& stem, const nlohmann::json& j) {
    emit(c, stem, "json", j.dump(2) + "\n");
}

std::vector<int> parse_ks(const std::string& s) {
    std::vector<int> ks;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            ks.push_back(std::stoi(item));
        } else {
            const int lo = std::stoi(item.substr(0, dots)), hi = std::stoi(item.substr(dots + 2));
            for (int k = lo; k <= hi; ++k) ks.push_back(k);
        }
    }
    if (ks.empty()) throw ConfigError("--k: empty list");
    return ks;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Twisted orbital integrals, weight factors and residues of local zeta integrals"};
    app.require_subcommand(1);
    std::string config_path;
    int workers = 0;
    app.add_option("-c,--config", config_path, "INI configuration file");
    app.add_option("-w,--workers", workers, "override pipeline.workers")->check(CLI::PositiveNumber);

    auto* wf = app.add_subcommand("wfactor", "torus volumes w_k(g,h) and closed form vs oracle");
    std::string g_spec = "1,0;0,1", h_spec, k_spec = "0..5";
    int lattice_i = 0;
    wf->add_option("--gmat", g_spec, "matrix g as 'a,b;c,d'");
    wf->add_option("--hmat", h_spec, "matrix h (default: identity, closed form)");
    wf->add_option("--k", k_spec, "k values, e.g. '-3..5' or '0,2,4'");
    wf->add_option("--lattice-i", lattice_i, "lattice pi^-i M_n(O)");

    auto* dt = app.add_subcommand("dtwist", "twisted discriminants |D_eps(S(gamma)^-1)|");
    std::string alphas = "2,3,1+5,5";
    dt->add_option("--alpha", alphas, "alpha values separated by , (or ; when entries contain commas)");

    auto* ss = app.add_subcommand("support-scan", "search for kappa with f_G(kappa X kappa^|-) != 0");
    std::string alpha = "2";
    int depth = 6;
    ss->add_option("--alpha", alpha, "torus parameter alpha");
    ss->add_option("--depth", depth, "kappa depth");

    auto* pk = app.add_subcommand("psik", "psi_k(gamma) for k in [0, k_max]");
    pk->add_option("--alpha", alpha, "torus parameter alpha");

    auto* co = app.add_subcommand("coeffs", "assembled coefficients c_k");
    auto* rg = app.add_subcommand("rg-term", "R_G (odd p) or A, B with per-shell terms (p = 2)");
    auto* re = app.add_subcommand("residue", "closed form and Laurent data, JSON report");
    auto* st = app.add_subcommand("selftest", "run the acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
        if (workers > 0) c.trunc.workers = workers;
        validate(c);

        if (*wf) {
            std::optional<std::string> h;
            if (!h_spec.empty()) h = h_spec;
            emit_table(c, "wfactor", wfactor_table(c, g_spec, h, parse_ks(k_spec), lattice_i));
        } else if (*dt) {
            auto list = split(alphas, alphas.find(';') != std::string::npos ? ';' : ',');
            emit_table(c, "dtwist", dtwist_table(c, list));
        } else if (*ss) {
            emit_json(c, "support_scan", support_scan_json(c, alpha, depth));
        } else if (*pk) {
            emit_table(c, "psik", psik_table(c, alpha));
        } else if (*co) {
            emit(c, "coeffs", c.format == "json" ? "json" : "csv", render_coeffs(c));
        } else if (*rg) {
            emit_table(c, "rg_term", rg_term_table(c, run_coefficients(c)));
        } else if (*re) {
            emit(c, "residue", "json", render_residue(c));
        } else if (*st) {
            auto results = run_acceptance(std::cout, c.seed);
            int failed = 0;
            for (const auto& r : results) failed += r.pass ? 0 : 1;
            std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size()
                      << " criteria passed\n";
            return failed == 0 ? 0 : 1;
        }
    } catch (const TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
