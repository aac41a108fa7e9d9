#include <sys/wait.h>

#include <cstdio>
#include <fstream>

#include "common.hpp"

using namespace drbc;
using namespace drbc::test;

namespace {

struct Run {
    int status;
    std::string out;
};

Run dr(const std::string& args) {
    std::string cmd = std::string(DR_BINARY) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("popen failed");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

bool has(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

std::filesystem::path scratch(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("drbc_cli_" + name);
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d;
}

}  // namespace

TEST(IdealSpec, ParseAndRoundTrip) {
    auto Ki = NumberField::quadratic(-1);
    EXPECT_EQ(parse_ideal(Ki, "5"), principal(Ki, 5));
    EXPECT_EQ(ideal_spec(parse_ideal(Ki, "2,1,1")), "2,1,1");
    for (auto& I : ideals_up_to(Ki, 40)) EXPECT_EQ(parse_ideal(Ki, ideal_spec(I)), I);
    EXPECT_THROW(parse_ideal(Ki, "3,1,1"), std::invalid_argument);
    EXPECT_THROW(parse_ideal(Ki, "2,1"), std::invalid_argument);
    EXPECT_THROW(parse_ideal(Ki, "0"), std::invalid_argument);
    EXPECT_EQ(parse_ideal(NumberField::rational(), "12"), q(12));
    EXPECT_THROW(parse_ideal(NumberField::rational(), "4,1,1"), std::invalid_argument);
}

TEST(IdealSpec, Rationals) {
    EXPECT_EQ(parse_rational("2"), Rational(2));
    EXPECT_EQ(parse_rational("3/2"), Rational(3, 2));
    EXPECT_EQ(parse_rational("1.25"), Rational(5, 4));
}

TEST(Export, CayleyDot) {
    auto& L = field(0).L;
    auto dot = cayley_dot(L, q(6));
    std::size_t nodes = 0, units = 0;
    std::istringstream in(dot);
    for (std::string line; std::getline(in, line);) {
        if (line.find("  n") == 0 && line.find("->") == std::string::npos) ++nodes;
        if (has(line, "doublecircle")) ++units;
    }
    EXPECT_EQ(nodes, 6u);
    EXPECT_EQ(units, 2u);

    Arithmetic A(NumberField::rational());
    LevelSystem E(A);
    DRMonoid empty;
    empty.field = NumberField::rational();
    empty.level = q(4);
    E.install(empty);
    EXPECT_THROW(cayley_dot(E, q(4)), std::invalid_argument);
}

TEST(Export, PartitionCsv) {
    std::vector<PartitionFunction> zs;
    for (Int B : {10, 100, 1000, 10000}) zs.push_back(partition_function(NumberField::quadratic(-1), Rational(2), B));
    auto csv = partition_csv(zs);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 5);
    EXPECT_TRUE(has(csv, "2,10000,"));
}

TEST(Cache, CorruptedTableFailsAgreement) {
    auto& L = field(-1).L;
    auto f = principal(L.field(), 5);
    auto M = dr_from_json(dr_to_json(L.dr(f)));
    std::swap(M.table[1][1], M.table[1][2]);
    Arithmetic A(L.field());
    LevelSystem fresh(A);
    fresh.install(M);
    EXPECT_TRUE(fresh.triple_agreement(f).any_fatal());
}

TEST(Suite, SelectionAndFilters) {
    RunConfig c;
    c.select.clear();
    EXPECT_TRUE(Suite(c).verify().items().empty());

    c.field = -1;
    c.select = {"kms.partition*"};
    auto r = Suite(c).verify();
    EXPECT_FALSE(r.items().empty());
    for (auto& it : r.items()) EXPECT_TRUE(glob_match("kms.partition*", it.check_id));
    EXPECT_FALSE(r.any_fatal());

    EXPECT_TRUE(glob_touches("kms.*", "kms"));
    EXPECT_TRUE(glob_touches("*", "functor"));
    EXPECT_FALSE(glob_touches("kms.*", "drmonoid"));
    EXPECT_TRUE(glob_touches("drmonoid.count/Q*", "drmonoid"));
}

TEST(Suite, ReportsAreDeterministic) {
    RunConfig c;
    c.field = 2;
    c.conductor_bound = 8;
    c.seed = 9;
    EXPECT_EQ(Suite(c).verify().to_json().dump(), Suite(c).verify().to_json().dump());
}

TEST(Suite, ReportSchema) {
    RunConfig c;
    c.field = -1;
    c.select = {"kms.uniformity*"};
    auto j = Suite(c).verify().to_json();
    ASSERT_FALSE(j.empty());
    for (auto& e : j) {
        EXPECT_TRUE(e.contains("check_id") && e.contains("paper_ref") && e.contains("status"));
        if (e["status"] == "fail") EXPECT_TRUE(e.contains("witness"));
        else EXPECT_FALSE(e.contains("witness"));
    }
}

TEST(Binary, FieldAndGroups) {
    auto f = dr("field -m -1");
    EXPECT_EQ(f.status, 0);
    EXPECT_TRUE(has(f.out, "discriminant -4"));
    EXPECT_TRUE(has(f.out, "signature (0,1)"));
    auto r = dr("rayclass -m -1 --conductor 5");
    EXPECT_TRUE(has(r.out, "invariant factors [4]"));
    auto i = dr("ideals -m 0 --bound 5");
    EXPECT_EQ(std::count(i.out.begin(), i.out.end(), '\n'), 5);
    auto c = dr("classgroup -m -5 --format json");
    EXPECT_EQ(json::parse(c.out)["order"], 2);
}

TEST(Binary, DrBuildShowAudit) {
    auto b = dr("dr build -m 0 --conductor 6");
    EXPECT_EQ(b.status, 0);
    EXPECT_TRUE(has(b.out, "6 elements"));
    EXPECT_TRUE(has(b.out, "units {(1,0,1),(5,0,1)}"));
    EXPECT_TRUE(has(b.out, "constructions agree: yes"));
    EXPECT_TRUE(has(dr("dr build -m 0 --conductor 1").out, "1 elements"));
    auto a = dr("dr audit -m 2 --conductor 2");
    EXPECT_TRUE(has(a.out, "computed |DR_f| 4 vs closed form 2^r1 h N(f) 16  [flagged]"));
    EXPECT_NE(dr("dr explode -m 0").status, 0);
}

TEST(Binary, CacheRoundTrip) {
    auto dir = scratch("cache");
    auto first = dr("dr build -m -5 --conductor 6 --format json --cache-dir " + dir.string());
    EXPECT_EQ(first.status, 0);
    EXPECT_TRUE(std::filesystem::exists(dir / "dr_m-5_6_0_6.json"));
    auto second = dr("dr build -m -5 --conductor 6 --format json --cache-dir " + dir.string());
    EXPECT_EQ(second.status, 0);
    EXPECT_EQ(first.out, second.out);
    EXPECT_TRUE(json::parse(second.out)["constructions_agree"].get<bool>());

    // a tampered cache is caught by the agreement check
    auto file = dir / "dr_m-5_6_0_6.json";
    json j;
    {
        std::ifstream in(file);
        j = json::parse(in);
    }
    auto row = j["table"][1];
    j["table"][1] = j["table"][2];
    j["table"][2] = row;
    {
        std::ofstream out(file);
        out << j.dump();
    }
    EXPECT_EQ(dr("dr build -m -5 --conductor 6 --cache-dir " + dir.string()).status, 1);
    std::filesystem::remove_all(dir);
}

TEST(Binary, Exports) {
    auto dot = dr("export dr -m 0 --conductor 6 --format dot");
    // one bracketed attribute list per node and per edge
    EXPECT_EQ(std::count(dot.out.begin(), dot.out.end(), '[') - std::count(dot.out.begin(), dot.out.end(), '>'), 6);
    auto csv = dr("export partition -m -1 --format csv");
    EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 5);
    auto om = dr("export omega --ext -1 --conductor 2");
    EXPECT_EQ(json::parse(om.out).size(), 3u);
    EXPECT_EQ(dr("export nothing").status, 2);
    auto dir = scratch("export");
    auto out = dir / "dr6.json";
    EXPECT_EQ(dr("export dr -m 0 --conductor 6 --out " + out.string()).status, 0);
    EXPECT_TRUE(std::filesystem::file_size(out) > 0);
    std::filesystem::remove_all(dir);
}

TEST(Binary, VerifyExitStatus) {
    auto empty = dr("verify --select ''");
    EXPECT_EQ(empty.status, 0);
    EXPECT_EQ(json::parse(empty.out).size(), 0u);
    auto kms = dr("verify -m -1 --select 'kms.partition*'");
    EXPECT_EQ(kms.status, 0);
    EXPECT_TRUE(has(kms.out, "kms.partition_overlap/Q(sqrt(-1)) beta=2 B=10000"));
    // uniformity genuinely fails for Q(i): fatal, exit 1
    EXPECT_EQ(dr("verify -m -1 --select 'kms.uniformity*'").status, 1);
    // deviations alone do not fail the run
    auto dev = dr("verify -m 2 --select 'drmonoid.cardinality_audit*' --format text");
    EXPECT_EQ(dev.status, 0);
    EXPECT_TRUE(has(dev.out, "deviation drmonoid.cardinality_audit/Q(sqrt(2))"));
}

TEST(Binary, ConfigFileFlagsWin) {
    auto dir = scratch("config");
    auto cfg = dir / "run.cfg";
    {
        std::ofstream out(cfg);
        out << "field=-1\nconductor=5\nformat=json\n";
    }
    auto a = dr("--config " + cfg.string() + " rayclass");
    EXPECT_EQ(json::parse(a.out)["invariant_factors"], (json{4}));
    auto b = dr("--config " + cfg.string() + " rayclass -m -5 --conductor 3");
    EXPECT_EQ(json::parse(b.out)["invariant_factors"], (json{2, 2}));
    std::filesystem::remove_all(dir);
}

TEST(Binary, VerifyDeterministic) {
    std::string args = "verify -m -3 --conductor-bound 12 --seed 5";
    auto a = dr(args), b = dr(args);
    EXPECT_EQ(a.out, b.out);
    EXPECT_FALSE(a.out.empty());
}
