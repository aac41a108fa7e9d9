#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "kms.hpp"

namespace drbc {

inline IntegralIdeal ideal_from_json(const json& j) { return {j.at(0).get<Int>(), j.at(1).get<Int>(), j.at(2).get<Int>()}; }

// Integer n (principal) or an HNF triple "a,c,d"; the triple must be an ideal.
inline IntegralIdeal parse_ideal(const NumberField& K, const std::string& s) {
    if (s.find(',') == std::string::npos) {
        std::size_t pos = 0;
        Int n = std::stoll(s, &pos);
        if (pos != s.size() || n <= 0) throw std::invalid_argument("bad ideal spec: " + s);
        return principal(K, n);
    }
    std::vector<Int> v;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ',')) v.push_back(std::stoll(part));
    if (v.size() != 3) throw std::invalid_argument("ideal spec needs three entries a,c,d: " + s);
    if (K.is_rational()) {
        if (v[0] <= 0 || v[1] != 0 || v[2] != 1) throw std::invalid_argument("rational ideal must be n,0,1: " + s);
        return {v[0], 0, 1};
    }
    IntegralIdeal I{v[0], v[1], v[2]};
    if (I.a <= 0 || I.d <= 0 || I.a % I.d != 0 || I.c % I.d != 0 || I.c < 0 || I.c >= I.a)
        throw std::invalid_argument("not an HNF triple: " + s);
    if (!(ideal_from_generators(K, basis(K, I)) == I)) throw std::invalid_argument("HNF triple is not an ideal: " + s);
    return I;
}

inline std::string ideal_spec(const IntegralIdeal& I) {
    return std::to_string(I.a) + "," + std::to_string(I.c) + "," + std::to_string(I.d);
}

// Integer, fraction "p/q" or decimal "x.y".
inline Rational parse_rational(const std::string& s) {
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(s);
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    std::string den = "1" + std::string(s.size() - dot - 1, '0');
    if (digits.empty() || digits == "-") throw std::invalid_argument("bad rational: " + s);
    return Rational(digits) / Rational(den);
}

inline json group_json(const Arithmetic& A, const IntegralIdeal& f) {
    const auto& G = A.ray_class_group(f);
    json reps = json::array();
    for (auto& r : G.reps) reps.push_back(ideal_json(r));
    return json{{"field", A.field().tag()}, {"conductor", ideal_json(f)}, {"order", G.order()}, {"invariant_factors", G.group.invariant_factors()}, {"reps", reps}};
}

inline json dr_to_json(const DRMonoid& M) {
    json elems = json::array();
    for (auto& e : M.elems) {
        json alt = json::array();
        for (auto& r : e.alt_reps) alt.push_back(ideal_json(r));
        elems.push_back(json{{"rep", ideal_json(e.rep)}, {"divisor", ideal_json(e.divisor)}, {"ray_class", e.ray_class}, {"alt_reps", alt}});
    }
    json index = json::array();
    for (auto& [k, v] : M.index) index.push_back(json{{"divisor", ideal_json(k.first)}, {"key", k.second}, {"element", v}});
    return json{{"field", M.field.tag()},
                {"m", M.field.m()},
                {"level", ideal_json(M.level)},
                {"construction", M.construction},
                {"size", M.size()},
                {"identity", M.identity},
                {"units", M.units},
                {"elements", elems},
                {"table", M.table},
                {"index", index}};
}

inline DRMonoid dr_from_json(const json& j) {
    DRMonoid M;
    M.field = NumberField::from_tag(j.at("m").get<Int>());
    M.level = ideal_from_json(j.at("level"));
    M.construction = j.at("construction").get<std::string>();
    M.identity = j.at("identity").get<Int>();
    M.units = j.at("units").get<std::vector<Int>>();
    for (auto& e : j.at("elements")) {
        DRElement x;
        x.rep = ideal_from_json(e.at("rep"));
        x.divisor = ideal_from_json(e.at("divisor"));
        x.ray_class = e.at("ray_class").get<Int>();
        for (auto& r : e.at("alt_reps")) x.alt_reps.push_back(ideal_from_json(r));
        M.elems.push_back(x);
    }
    M.table = j.at("table").get<std::vector<std::vector<Int>>>();
    for (auto& e : j.at("index")) M.index[{ideal_from_json(e.at("divisor")), e.at("key").get<Int>()}] = e.at("element").get<Int>();
    if (M.size() == 0 || static_cast<Int>(M.table.size()) != M.size()) throw std::runtime_error("cached monoid is malformed");
    return M;
}

inline std::string cache_name(const DRMonoid& M) {
    Int m = M.field.m();
    return "dr_m" + std::to_string(m) + "_" + std::to_string(M.level.a) + "_" + std::to_string(M.level.c) + "_" + std::to_string(M.level.d) + ".json";
}

inline std::string cache_name(const NumberField& K, const IntegralIdeal& f) {
    Int m = K.m();
    return "dr_m" + std::to_string(m) + "_" + std::to_string(f.a) + "_" + std::to_string(f.c) + "_" + std::to_string(f.d) + ".json";
}

inline void write_cache(const std::filesystem::path& dir, const DRMonoid& M) {
    std::filesystem::create_directories(dir);
    std::ofstream out(dir / cache_name(M));
    out << dr_to_json(M).dump() << "\n";
}

inline std::optional<DRMonoid> read_cache(const std::filesystem::path& dir, const NumberField& K, const IntegralIdeal& f) {
    auto p = dir / cache_name(K, f);
    if (!std::filesystem::exists(p)) return std::nullopt;
    std::ifstream in(p);
    auto M = dr_from_json(json::parse(in));
    if (!(M.field == K) || !(M.level == f)) throw std::runtime_error("cache file does not match its name: " + p.string());
    return M;
}

// Cayley graph: edges x -> x [P] for the classes of small primes.
inline std::string cayley_dot(const LevelSystem& L, const IntegralIdeal& f) {
    const auto& D = L.dr(f);
    if (D.size() == 0) throw std::invalid_argument("refusing to export an empty monoid");
    const auto& K = L.field();
    std::vector<std::pair<IntegralIdeal, Int>> gens;
    std::set<Int> seen{D.identity};
    Int bound = std::max<Int>(2 * f.norm(), 7);
    for (Int p : primes_up_to(bound))
        for (auto& P : primes_above(K, p)) {
            Int g = L.classify(D, P);
            if (seen.insert(g).second) gens.emplace_back(P, g);
        }
    std::ostringstream out;
    out << "digraph DR {\n  label=\"DR " << K.tag() << " " << to_string(f) << "\";\n";
    for (Int x = 0; x < D.size(); ++x) {
        out << "  n" << x << " [label=\"" << to_string(D.elems[x].rep) << "\"";
        if (D.is_unit(x)) out << ", shape=doublecircle";
        out << "];\n";
    }
    for (auto& [P, g] : gens)
        for (Int x = 0; x < D.size(); ++x) out << "  n" << x << " -> n" << D.mul(x, g) << " [label=\"" << to_string(P) << "\"];\n";
    out << "}\n";
    return out.str();
}

inline std::string dr_csv(const DRMonoid& D) {
    std::ostringstream out;
    out << "element,rep_a,rep_c,rep_d,divisor_a,divisor_c,divisor_d,ray_class,unit\n";
    for (Int x = 0; x < D.size(); ++x) {
        auto& e = D.elems[x];
        out << x << "," << e.rep.a << "," << e.rep.c << "," << e.rep.d << "," << e.divisor.a << "," << e.divisor.c << "," << e.divisor.d << ","
            << e.ray_class << "," << (D.is_unit(x) ? 1 : 0) << "\n";
    }
    return out.str();
}

inline std::string partition_csv(const std::vector<PartitionFunction>& zs) {
    std::ostringstream out;
    out.precision(17);
    out << "beta,B,ideal_sum_lo,ideal_sum_hi,euler_lo,euler_hi,consistent\n";
    for (auto& z : zs)
        out << z.beta.str() << "," << z.bound << "," << static_cast<double>(z.ideal_sum.lo) << "," << static_cast<double>(z.ideal_sum.hi) << ","
            << static_cast<double>(z.euler.lo) << "," << static_cast<double>(z.euler.hi) << "," << (z.consistent() ? 1 : 0) << "\n";
    return out.str();
}

}  // namespace drbc
