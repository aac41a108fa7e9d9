#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "drbc/suite.hpp"

using namespace drbc;

namespace {

struct Options {
    std::string field = "0";
    std::string conductor = "1";
    Int conductor_bound = 40;
    Int bound = 16;
    std::vector<std::string> betas;
    std::vector<Int> ext;
    std::string cache_dir;
    std::string format;
    std::uint64_t seed = 1;
    std::vector<std::string> select;
    bool field_given = false;
    bool select_given = false;
    std::string out;
    std::string action;
    std::string what;
};

struct Fatal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt_or(const Options& o, const std::string& d) { return o.format.empty() ? d : o.format; }

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::runtime_error("cannot write " + o.out);
    f << text;
}

std::vector<Rational> betas(const Options& o) {
    std::vector<Rational> bs;
    for (auto& b : o.betas) bs.push_back(parse_rational(b));
    if (bs.empty()) bs.push_back(Rational(2));
    return bs;
}

// Monoid at level f, through the cache when one is configured.
const DRMonoid& load_dr(LevelSystem& L, const IntegralIdeal& f, const Options& o) {
    if (!o.cache_dir.empty())
        if (auto M = read_cache(o.cache_dir, L.field(), f)) L.install(std::move(*M));
    return L.dr(f);
}

std::string group_text(const json& g) {
    std::ostringstream out;
    out << "field " << g["field"].get<std::string>() << "\n";
    out << "conductor " << g["conductor"].dump() << "\n";
    out << "order " << g["order"] << "\n";
    out << "invariant factors " << g["invariant_factors"].dump() << "\n";
    out << "representatives";
    for (auto& r : g["reps"]) out << " " << r.dump();
    out << "\n";
    return out.str();
}

int cmd_field(const Options& o) {
    auto K = NumberField::parse(o.field);
    Arithmetic A(K);
    json j{{"field", K.tag()},
           {"m", K.m()},
           {"degree", K.degree()},
           {"discriminant", K.discriminant()},
           {"signature", {K.r1(), K.r2()}},
           {"class_number", A.class_number()},
           {"narrow_class_number", A.narrow_class_group().order()},
           {"torsion_units", A.units().w}};
    if (A.units().has_eps) j["fundamental_unit"] = to_string(K, A.units().eps);
    if (fmt_or(o, "text") == "json") {
        emit(o, j.dump(2) + "\n");
        return 0;
    }
    std::ostringstream out;
    out << "field " << K.tag() << "\n";
    out << "degree " << K.degree() << "\n";
    out << "discriminant " << K.discriminant() << "\n";
    out << "signature (" << K.r1() << "," << K.r2() << ")\n";
    out << "class number " << j["class_number"] << "\n";
    out << "narrow class number " << j["narrow_class_number"] << "\n";
    out << "roots of unity " << A.units().w << "\n";
    if (A.units().has_eps) out << "fundamental unit " << to_string(K, A.units().eps) << "\n";
    emit(o, out.str());
    return 0;
}

int cmd_ideals(const Options& o) {
    auto K = NumberField::parse(o.field);
    Arithmetic A(K);
    auto is = A.ideals(o.bound);
    auto fmt = fmt_or(o, "text");
    std::ostringstream out;
    if (fmt == "json") {
        json a = json::array();
        for (auto& I : is) a.push_back(json{{"ideal", ideal_json(I)}, {"norm", I.norm()}});
        out << a.dump(2) << "\n";
    } else if (fmt == "csv") {
        out << "a,c,d,norm\n";
        for (auto& I : is) out << I.a << "," << I.c << "," << I.d << "," << I.norm() << "\n";
    } else {
        for (auto& I : is) out << std::setw(6) << I.norm() << "  " << to_string(I) << "\n";
    }
    emit(o, out.str());
    return 0;
}

int cmd_group(const Options& o, bool ray) {
    auto K = NumberField::parse(o.field);
    Arithmetic A(K);
    auto f = ray ? parse_ideal(K, o.conductor) : unit_ideal();
    auto g = group_json(A, f);
    if (!ray) g["class_number"] = A.class_number();
    emit(o, fmt_or(o, "text") == "json" ? g.dump(2) + "\n" : group_text(g));
    return 0;
}

std::string audit_text(const json& a) {
    std::ostringstream out;
    bool agrees = a["closed_form_agrees"].get<bool>();
    out << "computed |DR_f| " << a["computed"] << " vs closed form 2^r1 h N(f) " << a["closed_form"] << (agrees ? "" : "  [flagged]") << "\n";
    out << "h^+ N(f) " << a["narrow_times_norm"] << (a["narrow_agrees"].get<bool>() ? "" : "  [flagged]") << "\n";
    return out.str();
}

int cmd_dr(const Options& o) {
    auto K = NumberField::parse(o.field);
    Arithmetic A(K);
    LevelSystem L(A);
    auto f = parse_ideal(K, o.conductor);
    const auto& D = load_dr(L, f, o);
    auto fmt = fmt_or(o, "text");
    std::ostringstream out;
    if (o.action == "build") {
        auto rep = L.triple_agreement(f);
        bool agree = !rep.any_fatal();
        if (!o.cache_dir.empty()) write_cache(o.cache_dir, D);
        auto audit = L.cardinality_audit(f);
        if (fmt == "json") {
            out << json{{"monoid", dr_to_json(D)}, {"constructions_agree", agree}, {"audit", audit}, {"report", rep.to_json()}}.dump(2) << "\n";
        } else {
            out << "DR " << K.tag() << " f=" << to_string(f) << "\n";
            out << D.size() << " elements\n";
            out << "units {";
            for (std::size_t i = 0; i < D.units.size(); ++i) out << (i ? "," : "") << to_string(D.elems[D.units[i]].rep);
            out << "}\n";
            out << "constructions agree: " << (agree ? "yes" : "no") << "\n";
            out << audit_text(audit);
        }
        emit(o, out.str());
        if (!agree) throw Fatal("constructions disagree at " + to_string(f));
        return 0;
    }
    if (o.action == "show") {
        if (fmt == "json") out << dr_to_json(D).dump(2) << "\n";
        else if (fmt == "csv") out << dr_csv(D);
        else if (fmt == "dot") out << cayley_dot(L, f);
        else {
            for (Int x = 0; x < D.size(); ++x)
                out << std::setw(4) << x << "  " << to_string(D.elems[x].rep) << "  divisor " << to_string(D.elems[x].divisor)
                    << (D.is_unit(x) ? "  unit" : "") << "\n";
            out << "table\n";
            for (auto& row : D.table) {
                for (Int v : row) out << std::setw(4) << v;
                out << "\n";
            }
        }
        emit(o, out.str());
        return 0;
    }
    if (o.action == "audit") {
        auto a = L.cardinality_audit(f);
        emit(o, fmt == "json" ? a.dump(2) + "\n" : audit_text(a));
        return 0;
    }
    throw CLI::ValidationError("dr", "action must be build, show or audit");
}

RunConfig run_config(const Options& o) {
    RunConfig c;
    if (o.field_given) c.field = NumberField::parse(o.field).m();
    c.conductor_bound = o.conductor_bound;
    c.bound = o.bound;
    c.betas = betas(o);
    c.extensions = o.ext;
    c.cache_dir = o.cache_dir;
    c.format = fmt_or(o, "json");
    c.seed = o.seed;
    if (o.select_given) {
        c.select.clear();
        for (auto& s : o.select)
            if (!s.empty()) c.select.push_back(s);
    }
    return c;
}

int cmd_verify(const Options& o) {
    auto cfg = run_config(o);
    Suite S(cfg);
    if (!cfg.cache_dir.empty())
        for (Int m : S.fields())
            for (auto& f : S.conductors(m, cfg.conductor_bound)) {
                auto& L = S.ctx(m).L;
                if (auto M = read_cache(cfg.cache_dir, L.field(), f)) L.install(std::move(*M));
            }
    auto rep = S.verify();
    std::ostringstream out;
    if (cfg.format == "text") {
        for (auto& c : rep.items()) out << status_name(c.status) << " " << c.check_id << "\n";
        out << "pass " << rep.count(Status::Pass) << " fail " << rep.count(Status::Fail) << " deviation " << rep.count(Status::Deviation) << " info "
            << rep.count(Status::Info) << "\n";
    } else if (cfg.format == "csv") {
        out << "check_id,status\n";
        for (auto& c : rep.items()) out << c.check_id << "," << status_name(c.status) << "\n";
    } else {
        out << rep.to_json().dump(2) << "\n";
    }
    emit(o, out.str());
    return rep.any_fatal() ? 1 : 0;
}

int cmd_export(const Options& o) {
    auto K = NumberField::parse(o.field);
    auto fmt = fmt_or(o, "json");
    if (o.what == "dr") {
        Arithmetic A(K);
        LevelSystem L(A);
        auto f = parse_ideal(K, o.conductor);
        const auto& D = load_dr(L, f, o);
        if (fmt == "dot") emit(o, cayley_dot(L, f));
        else if (fmt == "csv") emit(o, dr_csv(D));
        else emit(o, dr_to_json(D).dump() + "\n");
        return 0;
    }
    if (o.what == "partition") {
        std::vector<PartitionFunction> zs;
        for (auto& b : betas(o))
            for (Int B : {10, 100, 1000, 10000}) zs.push_back(partition_function(K, b, B));
        if (fmt == "csv") {
            emit(o, partition_csv(zs));
        } else {
            json a = json::array();
            for (auto& z : zs) a.push_back(partition_json(z));
            emit(o, a.dump(2) + "\n");
        }
        return 0;
    }
    if (o.what == "omega") {
        Int m = o.ext.empty() ? K.m() : o.ext.front();
        if (m == 0) throw CLI::ValidationError("export omega", "needs a quadratic extension (--ext)");
        Arithmetic AQ(NumberField::rational()), AL(NumberField::from_tag(m));
        LevelSystem LQ(AQ), LL(AL);
        Endomotive EQ(LQ), EL(LL);
        ExtensionContext ext(AL.field());
        Functoriality F(ext, EQ, EL);
        emit(o, F.omega_json(parse_ideal(NumberField::rational(), o.conductor)).dump(2) + "\n");
        return 0;
    }
    if (o.what == "rayclass") {
        Arithmetic A(K);
        emit(o, group_json(A, parse_ideal(K, o.conductor)).dump(2) + "\n");
        return 0;
    }
    throw CLI::ValidationError("export", "unknown artifact: " + o.what + " (dr, partition, omega, rayclass)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deligne-Ribet monoids and Bost-Connes systems over Q and quadratic fields"};
    app.set_config("--config", "", "key=value configuration file; flags win");
    app.require_subcommand(1);
    app.fallthrough();
    Options o;

    auto common = [&](CLI::App* s) {
        auto* fo = s->add_option("-m,--field", o.field, "field: 0 for Q, else squarefree m for Q(sqrt(m))");
        fo->each([&](const std::string&) { o.field_given = true; });
        s->add_option("--conductor", o.conductor, "conductor: integer n or HNF triple a,c,d");
        s->add_option("--conductor-bound", o.conductor_bound, "norm bound for conductors in grid runs")->check(CLI::PositiveNumber);
        s->add_option("--bound", o.bound, "ideal norm bound B")->check(CLI::PositiveNumber);
        s->add_option("--beta", o.betas, "inverse temperatures (integer, p/q or decimal)")->delimiter(',');
        s->add_option("--ext", o.ext, "quadratic extensions L = Q(sqrt(m)) for functoriality")->delimiter(',');
        s->add_option("--cache-dir", o.cache_dir, "directory for cached DR monoids");
        s->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv", "dot", "text"}));
        s->add_option("--seed", o.seed, "random seed");
        auto* so = s->add_option("--select", o.select, "check-id globs")->delimiter(',');
        so->each([&](const std::string&) { o.select_given = true; });
        s->add_option("--out", o.out, "write output to a file");
    };

    common(&app);

    std::map<std::string, std::function<int()>> run;
    auto sub = [&](const std::string& name, const std::string& help, std::function<int()> f) {
        auto* s = app.add_subcommand(name, help);
        run[name] = std::move(f);
        return s;
    };
    sub("field", "field invariants", [&] { return cmd_field(o); });
    sub("ideals", "integral ideals of norm <= bound", [&] { return cmd_ideals(o); });
    sub("classgroup", "narrow class group", [&] { return cmd_group(o, false); });
    sub("rayclass", "strict ray class group", [&] { return cmd_group(o, true); });
    sub("dr", "DR monoid: build, show or audit", [&] { return cmd_dr(o); })
        ->add_option("action", o.action, "build, show or audit")
        ->required()
        ->check(CLI::IsMember({"build", "show", "audit"}));
    sub("verify", "run the check grid", [&] { return cmd_verify(o); });
    sub("export", "export an artifact", [&] { return cmd_export(o); })->add_option("what", o.what, "dr, partition, omega or rayclass")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    try {
        for (auto* s : app.get_subcommands()) return run.at(s->get_name())();
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n" << app.help();
        return 2;
    } catch (const Fatal& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
