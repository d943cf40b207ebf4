#include "twres/commands.hpp"

#include "twres/residue.hpp"
#include "twres/weights.hpp"

#include <sstream>

namespace twres {

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

int coordinate_count(int p) { return std::max(p - 1, 1); }

void push_value_cells(std::vector<std::string>& row, const CharacterValue& v) {
    for (int i = 0; i < coordinate_count(v.p()); ++i) {
        const Rational& x = v.coeff(i);
        row.push_back(x.get_num().get_str());
        row.push_back(x.get_den().get_str());
    }
}

void push_value_header(std::vector<std::string>& h, const std::string& name, int p) {
    for (int i = 0; i < coordinate_count(p); ++i) {
        h.push_back(name + "_z" + std::to_string(i) + "_num");
        h.push_back(name + "_z" + std::to_string(i) + "_den");
    }
}

std::string join_ints(const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
    return s;
}

}  // namespace

std::string Table::csv() const {
    std::ostringstream os;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_cell(cells[i]);
        os << '\n';
    };
    line(header);
    for (const auto& r : rows) line(r);
    return os.str();
}

nlohmann::json Table::json() const {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) obj[header[i]] = r[i];
        arr.push_back(obj);
    }
    return arr;
}

std::string Table::render(const std::string& format) const {
    if (format == "json") return json().dump(2) + "\n";
    return csv();
}

Mat parse_matrix(const LocalField& F, const std::string& spec) {
    std::vector<std::vector<Elem>> rows;
    std::istringstream rs(spec);
    std::string row;
    while (std::getline(rs, row, ';')) {
        std::vector<Elem> r;
        std::istringstream cs(row);
        std::string cell;
        while (std::getline(cs, cell, ',')) r.push_back(parse_elem(F, cell));
        rows.push_back(r);
    }
    const std::size_t n = rows.size();
    if (n == 0) throw DomainError("empty matrix");
    for (const auto& r : rows)
        if (r.size() != n) throw DomainError("matrix '" + spec + "' is not square");
    return Mat::from_rows(rows);
}

nlohmann::json run_metadata(const RunConfig& c) {
    return {
        {"config", c.to_ini(false)},
        {"haar", "vol(GL_2(O)) = 1, vol(O^x) = 1 on T, vol(Z_k) = 1, vol(A cap K) = 1"},
        {"additive_character", "Lambda_1(x) = zeta_p^(x mod p) on O"},
        {"lambda", c.lambda == LambdaChoice::Kutzko ? "kutzko: Lambda_1(h12 + h21/pi)" : "trivial"},
        {"coefficients", "c_k = 2 * int_T |D_eps| psi_k; factor 2 from T \\ H^+ = {1, w}"},
        {"kappa_depth", {{"requested", c.trunc.m}, {"effective", std::min(c.trunc.m, 2)}}},
        {"truncation",
         {{"k_max", c.trunc.k_max}, {"e_max", c.trunc.e_max}, {"b_window", c.trunc.b_window}}},
    };
}

Table wfactor_table(const RunConfig& c, const std::string& g_spec, const std::optional<std::string>& h_spec,
                    const std::vector<int>& ks, int lattice_i) {
    auto F = c.make_field();
    Mat g = parse_matrix(*F, g_spec);
    std::optional<Mat> h;
    if (h_spec) h = parse_matrix(*F, *h_spec);
    const int n = g.n();
    if (n % 2 != 0) throw DomainError("wfactor needs even n");
    ClubsuitTorus T{n, n / 2};
    auto set = square_class_reps(*F);
    Table t{{"k", "lattice_i", "delta", "volume_closed", "volume_oracle", "W_k"}, {}};
    for (int k : ks) {
        WeightQuery q{g, h, k, LatticeSpec{lattice_i}, T};
        std::string closed = "n/a";
        if (!h) closed = std::to_string(w_k_closed(q));
        Rational oracle = w_k_oracle(q);
        Rational W = W_k(g, h, set, {}, k, T, LatticeSpec{lattice_i});
        t.rows.push_back({std::to_string(k), std::to_string(lattice_i), join_ints(delta_vector(g, T.r)), closed,
                          rational_to_string(oracle), rational_to_string(W)});
    }
    return t;
}

Table dtwist_table(const RunConfig& c, const std::vector<std::string>& alphas) {
    auto F = c.make_field();
    auto form = GroupForm::orthogonal(*F, 2);
    Table t{{"alpha", "stratum", "regular", "d_eps_ord", "kernel_dim", "abs_d_eps", "weyl_ord", "phi_S"}, {}};
    for (const auto& a : alphas) {
        TorusElem g{parse_elem(*F, a)};
        Mat delta = S_of(g, form).inverse();
        auto rep = d_eps(delta, form, -1);
        auto w = weyl_disc(g.gamma(), form);
        t.rows.push_back({a, stratum_name(stratum_of(g.alpha)), rep.kernel_dim == 1 ? "yes" : "no",
                          std::to_string(rep.ord), std::to_string(rep.kernel_dim),
                          "q^" + std::to_string(-rep.ord), std::to_string(w.ord), std::to_string(phi_S(g, form))});
    }
    return t;
}

nlohmann::json support_scan_json(const RunConfig& c, const std::string& alpha, int depth) {
    auto F = c.make_field();
    KutzkoDatum K(F, c.lambda);
    TorusElem g{parse_elem(*F, alpha)};
    auto r = support_scan(K, g, depth, c.trunc.b_window);
    nlohmann::json j;
    j["alpha"] = alpha;
    j["regime"] = stratum_name(r.regime);
    if (r.witness) {
        const auto& w = *r.witness;
        j["witness"] = {{"i", w.i},
                        {"ord_b", -w.j},
                        {"b", w.j == 0 ? std::string("0") : w.b.to_string(6)},
                        {"kappa_mod_p2", w.kappa},
                        {"f_exponent", w.exponent}};
    } else {
        j["witness"] = "none";
    }
    j["strata_searched"] = r.strata_searched;
    j["depth"] = {{"requested", r.depth_requested}, {"effective", r.depth_effective}};
    j["metadata"] = run_metadata(c);
    return j;
}

Table psik_table(const RunConfig& c, const std::string& alpha) {
    auto F = c.make_field();
    KutzkoDatum K(F, c.lambda);
    TorusElem g{parse_elem(*F, alpha)};
    Table t{{"k"}, {}};
    push_value_header(t.header, "psi", F->p());
    t.header.push_back("q_half_power");
    for (int k = 0; k <= c.trunc.k_max; ++k) {
        auto v = psi_k(K, g, k, c.trunc);
        std::vector<std::string> row{std::to_string(k)};
        push_value_cells(row, v.value);
        row.push_back(std::to_string(v.half_q_exp));
        t.rows.push_back(row);
    }
    return t;
}

CoefficientTable run_coefficients(const RunConfig& c) {
    auto F = c.make_field();
    KutzkoDatum K(F, c.lambda);
    return assemble_coefficients(K, c.trunc);
}

Table coeffs_table(const RunConfig& c, const CoefficientTable& tab) {
    Table t{{"k"}, {}};
    push_value_header(t.header, "c", c.p);
    t.header.push_back("q_half_power");
    for (std::size_t k = 0; k < tab.c.size(); ++k) {
        std::vector<std::string> row{std::to_string(k)};
        push_value_cells(row, tab.c[k]);
        row.push_back("0");
        t.rows.push_back(row);
    }
    return t;
}

Table rg_term_table(const RunConfig& c, const CoefficientTable& tab) {
    Table t{{"quantity", "shell"}, {}};
    push_value_header(t.header, "value", c.p);
    auto add = [&](const std::string& name, const std::string& shell, const CharacterValue& v) {
        std::vector<std::string> row{name, shell};
        push_value_cells(row, v);
        t.rows.push_back(row);
    };
    if (c.regime == Regime::Odd) {
        add("R_G", "all", r_g_term(tab));
        add("c_0", "all", tab.c.at(0));
    } else {
        auto ab = coefficient_A_B(tab);
        add("A", "all", ab.A.value);
        add("B", "all", ab.B.value);
        for (std::size_t s = 0; s < ab.shells.size(); ++s) {
            add("A", std::to_string(ab.shells[s]), ab.A_inc[s]);
            add("B", std::to_string(ab.shells[s]), ab.B_inc[s]);
        }
    }
    return t;
}

nlohmann::json residue_json(const RunConfig& c, const CoefficientTable& tab) {
    ResidueInput in;
    in.p = c.p;
    in.q = c.p;
    in.n = 2;
    in.max_degree = 1;
    in.c = tab.c;
    in.unit_square_classes = tab.unit_square_classes;
    in.metadata = run_metadata(c);
    auto j = residue_report(in);
    j["metadata"]["unit_square_classes"] = tab.unit_square_classes;
    if (c.regime == Regime::Odd) j["metadata"]["R_G"] = r_g_term(tab).to_string();
    return j;
}

std::string render_coeffs(const RunConfig& c) { return coeffs_table(c, run_coefficients(c)).render(c.format); }

std::string render_residue(const RunConfig& c) { return residue_json(c, run_coefficients(c)).dump(2) + "\n"; }

}  // namespace twres
