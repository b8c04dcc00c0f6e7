#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rauzy/cli.hpp"

using namespace rauzy;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("rauzy_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { std::error_code ec; fs::remove_all(path, ec); }

    fs::path write(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream f(p, std::ios::binary);
        f << content;
        return p;
    }

    std::string read(const fs::path& p) const {
        std::ifstream f(p, std::ios::binary);
        std::ostringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
};

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("cli info") {
    TempDir tmp;
    const auto trib = tmp.write("trib1.sub", "a -> ab\nb -> ac\nc -> a\n");
    const RunResult r = run({"info", trib.string()});
    REQUIRE(r.code == 0);
    REQUIRE(r.out.find("[1 1 1]") != std::string::npos);
    REQUIRE(r.out.find("[1 0 0]") != std::string::npos);
    REQUIRE(r.out.find("[0 1 0]") != std::string::npos);
    REQUIRE(r.out.find("char poly: X^3 - X^2 - X - 1") != std::string::npos);
    REQUIRE(r.out.find("1.8392867552") != std::string::npos);
    REQUIRE(r.out.find("primitive: true") != std::string::npos);
    REQUIRE(r.out.find("irreducible: true") != std::string::npos);
    REQUIRE(r.out.find("unimodular: true") != std::string::npos);
    REQUIRE(r.out.find("pisot: true") != std::string::npos);
}

TEST_CASE("cli error paths") {
    TempDir tmp;
    SECTION("missing file is an I/O error") {
        REQUIRE(run({"info", (tmp.path / "nope.sub").string()}).code == 1);
    }
    SECTION("unparseable file") {
        const auto bad = tmp.write("bad.sub", "a => ab\n");
        REQUIRE(run({"info", bad.string()}).code == 1);
    }
    SECTION("unknown command") {
        REQUIRE(run({"frobnicate"}).code == 1);
    }
    SECTION("unknown flag") {
        const auto trib = tmp.write("trib1.sub", "a -> ab\nb -> ac\nc -> a\n");
        REQUIRE(run({"info", trib.string(), "--wat"}).code == 1);
    }
    SECTION("no arguments prints usage") {
        const RunResult r = run({});
        REQUIRE(r.code == 1);
        REQUIRE(r.err.find("usage:") != std::string::npos);
    }
    SECTION("validation maps to exit 2") {
        const auto t1 = tmp.write("t1.sub", "a -> ab\nb -> ac\nc -> a\n");
        const auto t2 = tmp.write("t2.sub", "a -> aab\nb -> ac\nc -> a\n"); // different matrix
        REQUIRE(run({"intersect", t1.string(), t2.string()}).code == 2);
    }
}

TEST_CASE("cli render") {
    TempDir tmp;
    const auto trib = tmp.write("trib1.sub", "a -> ab\nb -> ac\nc -> a\n");
    const auto out = tmp.path / "fractal.ppm";
    const RunResult r = run({"render", trib.string(), "--out", out.string(), "--points", "20000",
                             "--width", "120", "--height", "90", "--subtiles"});
    REQUIRE(r.code == 0);
    const std::string bytes = tmp.read(out);
    REQUIRE(bytes.rfind("P6\n120 90\n255\n", 0) == 0);
    REQUIRE(bytes.size() == 14 + 120u * 90u * 3u);
}

TEST_CASE("cli intersect") {
    TempDir tmp;
    const auto tau1 = tmp.write("tau1.sub", "a -> aba\nb -> ab\n");
    const auto tau2 = tmp.write("tau2.sub", "a -> aab\nb -> ba\n");
    const auto chi1 = tmp.write("chi1.sub", "a -> aab\nb -> ab\n");
    const auto chi2 = tmp.write("chi2.sub", "a -> baa\nb -> ba\n");

    SECTION("success prints the morphism and writes the same bytes to the file") {
        const auto mfile = tmp.path / "tau.morphism";
        const RunResult r = run({"intersect", tau1.string(), tau2.string(), "--out-morphism", mfile.string()});
        REQUIRE(r.code == 0);
        REQUIRE(r.out ==
                "block A = a | a\n"
                "block B = ba | ab\n"
                "block C = b | b\n"
                "block D = ab | ba\n"
                "phi A -> AB\n"
                "phi B -> ABCA\n"
                "phi C -> D\n"
                "phi D -> DAAC\n");
        REQUIRE(tmp.read(mfile) == r.out);
    }
    SECTION("empty intersection exits 4") {
        REQUIRE(run({"intersect", chi1.string(), chi2.string()}).code == 4);
        REQUIRE(run({"intersect", chi1.string(), chi2.string(), "--seed-cap", "17"}).code == 4);
    }
    SECTION("cap exceeded exits 3") {
        const auto t1 = tmp.write("t1.sub", "a -> ab\nb -> ac\nc -> a\n");
        const auto t2 = tmp.write("t2.sub", "a -> ab\nb -> ca\nc -> a\n");
        REQUIRE(run({"intersect", t1.string(), t2.string(), "--blockcount-cap", "4"}).code == 3);
    }
    SECTION("optional render of the common points") {
        const auto img = tmp.path / "common.ppm";
        const RunResult r = run({"intersect", tau1.string(), tau2.string(), "--render", img.string(),
                                 "--points", "5000", "--width", "64", "--height", "64"});
        REQUIRE(r.code == 0);
        REQUIRE(tmp.read(img).rfind("P6\n64 64\n255\n", 0) == 0);
    }
}

TEST_CASE("cli check-coincidence and aligned") {
    TempDir tmp;
    const auto trib1 = tmp.write("trib1.sub", "a -> ab\nb -> ac\nc -> a\n");
    const auto trib2 = tmp.write("trib2.sub", "a -> ab\nb -> ca\nc -> a\n");

    SECTION("coincidence report") {
        const RunResult r = run({"check-coincidence", trib1.string(), "--max-k", "6"});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.find("strong coincidence: holds") != std::string::npos);
    }
    SECTION("aligned positions for letter a start at 0") {
        const RunResult r = run({"aligned", trib1.string(), trib2.string(), "--letter", "a", "--length", "50"});
        REQUIRE(r.code == 0);
        REQUIRE(r.out.rfind("count ", 0) == 0);
        REQUIRE(r.out.find("\n0\n") != std::string::npos);
    }
    SECTION("aligned for letter c is empty at small scale") {
        const RunResult r = run({"aligned", trib1.string(), trib2.string(), "--letter", "c", "--length", "1000"});
        REQUIRE(r.code == 0);
        REQUIRE(r.out == "count 0\n");
    }
}

TEST_CASE("cli outputs are deterministic") {
    TempDir tmp;
    const auto trib1 = tmp.write("trib1.sub", "a -> ab\nb -> ac\nc -> a\n");
    const auto trib2 = tmp.write("trib2.sub", "a -> ab\nb -> ca\nc -> a\n");
    const auto img1 = tmp.path / "r1.ppm";
    const auto img2 = tmp.path / "r2.ppm";
    REQUIRE(run({"render", trib1.string(), "--out", img1.string(), "--points", "30000"}).code == 0);
    REQUIRE(run({"render", trib1.string(), "--out", img2.string(), "--points", "30000"}).code == 0);
    REQUIRE(tmp.read(img1) == tmp.read(img2));

    const RunResult a = run({"intersect", trib1.string(), trib2.string()});
    const RunResult b = run({"intersect", trib1.string(), trib2.string()});
    REQUIRE(a.out == b.out);
}
