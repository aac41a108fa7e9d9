#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <iostream>

#include "drbc/suite.hpp"

using namespace drbc;

namespace {

std::string run_capture(const std::string& cmd, int& status) {
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) throw std::runtime_error("popen failed: " + cmd);
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int st = pclose(p);
    status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

// The verify subcommand run twice as separate processes.
Report cli_determinism(const std::string& dr) {
    Report rep;
    const std::string cmd = dr + " verify -m -1 --seed 3 2>/dev/null";
    int s1 = 0, s2 = 0;
    auto a = run_capture(cmd, s1), b = run_capture(cmd, s2);
    rep.check("cli.determinism_process/Q(sqrt(-1)) seed=3", "two dr verify processes with a fixed seed print identical reports",
              !a.empty() && a == b && s1 == s2, json{{"bytes", a.size()}, {"other_bytes", b.size()}, {"status", {s1, s2}}});
    return rep;
}

int criterion(int k, const std::string& dr) {
    auto t0 = std::chrono::steady_clock::now();
    Suite S(RunConfig{});
    Report rep = S.criterion(k);
    if (k == 12 && !dr.empty()) rep.merge(cli_determinism(dr));
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool pass = !rep.items().empty() && !rep.any_fatal();
    std::cout << "criterion " << k << ": " << (pass ? "PASS" : "FAIL") << "  " << Suite::criterion_name(k) << "  (checks " << rep.items().size()
              << ", pass " << rep.count(Status::Pass) << ", fail " << rep.count(Status::Fail) << ", deviation " << rep.count(Status::Deviation)
              << ", info " << rep.count(Status::Info) << ", " << std::fixed << std::setprecision(2) << secs << " s)" << std::endl;
    int shown = 0;
    for (auto& c : rep.items())
        if (c.status == Status::Fail && shown++ < 5) std::cout << "  fail " << c.check_id << " " << c.witness.dump() << "\n";
    if (shown > 5) std::cout << "  ... " << shown - 5 << " more failures\n";
    return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    std::string dr;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--criterion") && i + 1 < argc) only = std::atoi(argv[++i]);
        else if (!std::strcmp(argv[i], "--dr") && i + 1 < argc) dr = argv[++i];
        else {
            std::cerr << "usage: acceptance [--criterion N] [--dr PATH]\n";
            return 2;
        }
    }
    int rc = 0;
    for (int k = 1; k <= Suite::kCriteria; ++k)
        if (only == 0 || only == k) rc |= criterion(k, dr);
    return rc;
}
