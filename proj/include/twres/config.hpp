#pragma once

#include "twres/integrator.hpp"

#include <cstdint>
#include <string>

namespace twres {

enum class Regime { Odd, Even };

/// INI configuration: sections [field], [pipeline], [output].
struct RunConfig {
    // [field]
    int p = 5;
    int e = 1;
    std::vector<long> eisenstein{-5, 1};
    int precision = 24;
    // [pipeline]
    Regime regime = Regime::Odd;
    LambdaChoice lambda = LambdaChoice::Kutzko;
    TruncationSpec trunc{};
    std::uint64_t seed = 20240601;
    // [output]
    std::string format = "csv";  // csv | json; residue and support-scan always emit json
    std::string dir;             // empty: write to stdout

    FieldPtr make_field() const;
    /// Plain-text INI rendering, used as report metadata.
    // runtime = false drops settings that cannot change results (workers, output dir)
    std::string to_ini(bool runtime = true) const;
};

/// Parses and validates; ConfigError messages name the offending key path (section.key).
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
void validate(const RunConfig& c);

/// TWRES_OUTPUT_DIR overrides output.dir when set.
std::string output_dir(const RunConfig& c);

}  // namespace twres
