#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fluidruin/cli.hpp"
#include "support.hpp"

using namespace fluidruin;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "fluidruin");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path write_file(const std::string& name, const std::string& text) {
    const fs::path dir = fs::temp_directory_path() / "fluidruin_cli_test";
    fs::create_directories(dir);
    const fs::path p = dir / name;
    std::ofstream(p) << text;
    return p;
}

std::string toy_file() { return write_file("toy.json", testsupport::kToyDocument).string(); }

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("validate") {
    const auto good = run({"validate", "--model", toy_file()});
    CHECK(good.code == 0);
    CHECK(good.out == "ok\n");

    std::string broken = testsupport::kToyDocument;
    broken.replace(broken.find("[[-1, 1], [1, -1]]"), 18, "[[-1, 2], [1, -1]]");
    const auto r = run({"validate", "--model", write_file("bad.json", broken).string()});
    CHECK(r.code == 1);
    CHECK(r.out.find("coord1.pre_generator") != std::string::npos);

    CHECK(run({"validate", "--model", "/nonexistent/model.json"}).code == 2);
    CHECK(run({"validate", "--model", write_file("junk.json", "{not json").string()}).code == 1);
    CHECK(run({"validate"}).code == 1);
    CHECK(run({}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("psi") {
    const auto r = run({"psi", "--model", toy_file(), "--gamma", "10", "--n-max", "3"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "coord,ell,n,value");
    std::getline(in, line);
    CHECK(line.rfind("1,1,2,0.333333333333", 0) == 0);
    std::getline(in, line);
    CHECK(line.rfind("1,2,2,0.05", 0) == 0);
    CHECK(lines(r.out) == 1 + 2 * (2 + 3));
    CHECK(run({"psi", "--model", toy_file(), "--gamma", "10", "--n-max", "1"}).code == 1);
    CHECK(run({"psi", "--model", toy_file(), "--gamma", "10"}).code == 1);
    CHECK(run({"psi", "--model", toy_file(), "--gamma", "2", "--n-max", "4"}).code == 1);
}

TEST_CASE("joint") {
    const auto r = run({"joint", "--model", toy_file(), "--gamma", "10", "--x-grid", "0.2,0.5", "--y-grid", "0.2,1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.rfind("x,y,order1,order2,total,defect\n0.2,0.2,0.0025,0.0025,0.005,0\n", 0) == 0);
    CHECK(lines(r.out) == 5);
    CHECK(run({"joint", "--model", toy_file(), "--gamma", "10", "--x-grid", "0.5,0.2", "--y-grid", "1"}).code == 1);
    CHECK(run({"joint", "--model", toy_file(), "--gamma", "10", "--x-grid", "0.5", "--y-grid", "3", "--n-max", "5"})
              .code == 1);
    const auto cut = run({"joint", "--model", toy_file(), "--gamma", "10", "--x-grid", "0.5", "--y-grid", "3",
                          "--n-max", "5", "--allow-truncation"});
    CHECK(cut.code == 0);
    CHECK(cut.out.find(",0\n") == std::string::npos);

    const fs::path target = fs::temp_directory_path() / "fluidruin_cli_test" / "joint.csv";
    fs::remove(target);
    const auto f = run({"joint", "--model", toy_file(), "--gamma", "10", "--x-grid", "0.2", "--y-grid", "0.2",
                        "--out", target.string()});
    CHECK(f.code == 0);
    CHECK(f.out.empty());
    CHECK(fs::exists(target));
    CHECK(run({"joint", "--model", toy_file(), "--gamma", "10", "--x-grid", "0.2", "--y-grid", "0.2", "--out",
               "/nonexistent/dir/x.csv"})
              .code == 2);
}

TEST_CASE("simulate") {
    const std::vector<std::string> base = {"simulate", "--model", toy_file(), "--samples", "50", "--seed", "9"};
    const auto a = run(base);
    REQUIRE(a.code == 0);
    CHECK(lines(a.out) == 51);
    CHECK(a.err.find("censored") != std::string::npos);
    CHECK(run(base).out == a.out);

    auto with_gamma = base;
    with_gamma.insert(with_gamma.end(), {"--gamma", "20"});
    const auto g = run(with_gamma);
    CHECK(g.code == 0);
    CHECK(g.err.find("compatible pastings") != std::string::npos);
    auto threaded = with_gamma;
    threaded.insert(threaded.end(), {"--threads", "3"});
    CHECK(run(threaded).out == g.out);

    CHECK(run({"simulate", "--model", toy_file(), "--samples", "0"}).code == 1);
    CHECK(run({"simulate", "--model", toy_file()}).code == 1);
    CHECK(run({"simulate", "--model", toy_file(), "--samples", "5", "--gamma", "1.5"}).code == 1);
}

TEST_CASE("compare") {
    const std::vector<std::string> args = {"compare", "--model", toy_file(), "--gamma", "50", "--x-grid", "0.5,1",
                                           "--y-grid", "1,2", "--samples", "100", "--seed", "4"};
    const auto r = run(args);
    CHECK(r.code == 0);
    CHECK(r.out.rfind("x,y,total,empirical,se,defect,abs_diff,band,within\n", 0) == 0);
    CHECK(lines(r.out) == 5);
    auto strict = args;
    strict.insert(strict.end(), {"--tolerance", "0"});
    const auto s = run(strict);
    CHECK(s.code == 1);
    CHECK(s.err.find("outside") != std::string::npos);
    auto small = args;
    small[4] = "1.9";
    CHECK(run(small).code == 1);
}

TEST_CASE("converge") {
    const auto r = run({"converge", "--model", toy_file(), "--gammas", "10,20", "--samples", "200", "--horizon", "100"});
    REQUIRE(r.code == 0);
    CHECK(lines(r.out) == 3);
    CHECK(run({"converge", "--model", toy_file(), "--gammas", "10", "--samples", "200", "--epsilon", "1.5"}).code == 1);
}
