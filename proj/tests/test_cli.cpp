#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <string>

#include <json.hpp>

#ifndef MODELATTICE_CLI_PATH
#error "MODELATTICE_CLI_PATH must point at the built command-line tool"
#endif

namespace {

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string("\"") + MODELATTICE_CLI_PATH + "\" " + args + " 2>/dev/null";
    RunResult r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
    const int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

long count_lines(const std::string& s) { return std::count(s.begin(), s.end(), '\n'); }

}  // namespace

TEST_CASE("enumerate writes the full table", "[cli]") {
    const auto csv = run("enumerate");
    REQUIRE(csv.status == 0);
    REQUIRE(count_lines(csv.out) == 283);
    const auto js = run("enumerate --format json");
    REQUIRE(js.status == 0);
    const auto doc = nlohmann::json::parse(js.out);
    REQUIRE(doc.size() == 282);
    long meaningful = 0;
    for (const auto& row : doc) meaningful += row.at("meaningful").get<bool>();
    REQUIRE(meaningful == 21);
}

TEST_CASE("classify reports class and rule", "[cli]") {
    const auto gs = run("classify '[Ans Eas]'");
    REQUIRE(gs.status == 0);
    REQUIRE(gs.out.find("class: gs") != std::string::npos);
    const auto ap = run("classify '[Ecp Ans]' --format json");
    REQUIRE(ap.status == 0);
    const auto j = nlohmann::json::parse(ap.out);
    REQUIRE(j.at("meaningful") == false);
    REQUIRE(j.at("rule") == "AP-a");
    REQUIRE(j.at("class").is_null());
    REQUIRE(run("classify '[Acs Ans]'").status == 2);
}

TEST_CASE("lattice and quotients", "[cli]") {
    const auto dot = run("lattice");
    REQUIRE(dot.status == 0);
    std::size_t edges = 0, pos = 0;
    while ((pos = dot.out.find("->", pos)) != std::string::npos) {
        ++edges;
        pos += 2;
    }
    REQUIRE(edges == 12);
    const auto om = run("lattice --scenario OM");
    REQUIRE(om.status == 0);
    REQUIRE(om.out.find("digraph") != std::string::npos);
    REQUIRE(run("quotients").status == 0);
}

TEST_CASE("matrix, merging and verify", "[cli]") {
    const auto m = run("matrix");
    REQUIRE(m.status == 0);
    REQUIRE(count_lines(m.out) == 8);
    REQUIRE(run("merging").status == 0);
    const auto v = run("verify PS-not-GW");
    REQUIRE(v.status == 0);
    REQUIRE(nlohmann::json::parse(v.out).at("ok") == true);
    REQUIRE(run("verify nope").status == 2);
}

TEST_CASE("usage errors exit with status 2", "[cli]") {
    REQUIRE(run("").status == 2);
    REQUIRE(run("frobnicate").status == 2);
    REQUIRE(run("enumerate --format yaml").status == 2);
    REQUIRE(run("--help").status == 0);
}
