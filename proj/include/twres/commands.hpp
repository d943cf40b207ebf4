#pragma once

#include "twres/config.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace twres {

/// Header plus rows of preformatted cells, rendered as CSV or a JSON array of objects.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::string csv() const;
    nlohmann::json json() const;
    std::string render(const std::string& format) const;
};

/// Matrix from "a,b;c,d" with field expressions as entries.
Mat parse_matrix(const LocalField& F, const std::string& spec);

/// Normalization metadata recorded in every JSON artifact.
nlohmann::json run_metadata(const RunConfig& c);

Table wfactor_table(const RunConfig& c, const std::string& g, const std::optional<std::string>& h,
                    const std::vector<int>& ks, int lattice_i);
Table dtwist_table(const RunConfig& c, const std::vector<std::string>& alphas);
nlohmann::json support_scan_json(const RunConfig& c, const std::string& alpha, int depth);
Table psik_table(const RunConfig& c, const std::string& alpha);
Table coeffs_table(const RunConfig& c, const CoefficientTable& t);
Table rg_term_table(const RunConfig& c, const CoefficientTable& t);
nlohmann::json residue_json(const RunConfig& c, const CoefficientTable& t);

CoefficientTable run_coefficients(const RunConfig& c);

/// Subcommand output text (trailing newline included).
std::string render_coeffs(const RunConfig& c);
std::string render_residue(const RunConfig& c);

}  // namespace twres
