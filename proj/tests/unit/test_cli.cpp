#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Output {
    int code = -1;
    std::string out;
};

Output xlab(const std::string& args) {
    const std::string cmd = std::string(XLAB_CLI_PATH) + " " + args + " 2>&1";
    Output r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0)
        r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct Workspace {
    fs::path dir;
    explicit Workspace(const std::string& name) : dir(fs::temp_directory_path() / ("xlab_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Workspace() { fs::remove_all(dir); }

    std::string file(const std::string& name, const std::string& content) const {
        std::ofstream(dir / name, std::ios::binary) << content;
        return (dir / name).string();
    }
    std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const char* kK2Rational = R"({"n": 2, "eta": [["0", "1/2"], ["1/2", "0"]], "mode": "rational"})";
const char* kK3Float = R"({"n": 3, "eta": [[0, 1, 1], [1, 0, 1], [1, 1, 0]], "mode": "f64"})";

} // namespace

TEST_CASE("list") {
    const auto r = xlab("list");
    CHECK(r.code == 0);
    for (const char* n : {"cycle-spectral", "partition-refinement", "product-complete", "noncompact-blocks",
                          "convolution-eigs", "sphere-k22"})
        CHECK(r.out.find(n) != std::string::npos);
}

TEST_CASE("density") {
    Workspace w("density");
    const auto c4 = w.file("c4.txt", "0 1\n1 2\n2 3\n3 0\n");
    const auto c3 = w.file("c3.txt", "0 1\n1 2\n2 0\n");
    const auto k2 = w.file("k2.json", kK2Rational);
    const auto k3 = w.file("k3.json", kK3Float);
    CHECK(xlab("density --graph " + c4 + " --space " + k2).out == "2\n");
    CHECK(xlab("density --graph " + c3 + " --space " + k2).out == "0\n");
    CHECK(std::stod(xlab("density --graph " + c3 + " --space " + k3).out) == doctest::Approx(0.75).epsilon(1e-14));

    const auto j = nlohmann::json::parse(xlab("density --json --graph " + c4 + " --space " + k2).out);
    CHECK(j["t"] == "2");
    CHECK(j["width"] == 2);
    CHECK(j["mode"] == "rational");

    const auto big = w.file("k22.json", R"({"left": 2, "right": 2, "edges": [[0,0],[0,1],[1,0],[1,1]]})");
    CHECK(xlab("density --bigraph --graph " + big + " --space " + k2).out == "2\n");
    CHECK(xlab("density --normalized --graph " + c4 + " --space " + k2).out == "2\n");
}

TEST_CASE("density errors") {
    Workspace w("density_err");
    const auto bad = w.file("bad.txt", "0 x\n");
    const auto k2 = w.file("k2.json", kK2Rational);
    const auto r = xlab("density --graph " + bad + " --space " + k2);
    CHECK(r.code == 2);
    CHECK(r.out.find("error") != std::string::npos);
    CHECK(xlab("density --graph " + w.path("missing.txt") + " --space " + k2).code == 2);
    CHECK(xlab("density --space " + k2).code == 2);
    CHECK(xlab("frobnicate").code == 2);
}

TEST_CASE("seq") {
    Workspace w("seq");
    const auto c4 = w.file("c4.txt", "0 1\n1 2\n2 3\n3 0\n");
    const auto k3 = w.file("k3.json", kK3Float);
    const auto report = w.path("report.csv");
    const auto r = xlab("seq --graph " + c4 + " --space " + k3 + " --orders 5 --seed 3 --report " + report);
    CHECK(r.code == 0);
    CHECK(r.out.find("orders_tested 7") != std::string::npos);
    const auto csv = slurp(report);
    CHECK(csv.rfind("order_index,order,total_mass,deviation,deviation_vs_hom,null_tuples\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 8);

    const auto tri = w.file("c3.txt", "0 1\n1 2\n2 0\n");
    CHECK(xlab("seq --graph " + tri + " --space " + k3).code == 2);
}

TEST_CASE("sphere-k22") {
    Workspace w("sphere");
    const auto a = w.path("a.csv");
    const auto b = w.path("b.csv");
    CHECK(xlab("sphere-k22 --d 3 --samples 1000 --seed 5 --out " + a).code == 0);
    CHECK(xlab("sphere-k22 --d 3 --samples 1000 --seed 5 --out " + b).code == 0);
    const auto csv = slurp(a);
    CHECK(csv == slurp(b));
    CHECK(csv.rfind("order,sample_index,inner_product\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 2001);
    CHECK(xlab("sphere-k22 --d 4 --samples 1000 --out " + a).code == 2);
}

TEST_CASE("spectrum") {
    Workspace w("spectrum");
    const auto k3 = w.file("k3.json", kK3Float);
    const auto r = xlab("spectrum --space " + k3);
    CHECK(r.code == 0);
    std::istringstream in(r.out);
    double a = 0, b = 0, c = 0;
    in >> a >> b >> c;
    CHECK(a == doctest::Approx(1.0));
    CHECK(b == doctest::Approx(-0.5));
    CHECK(c == doctest::Approx(-0.5));
    const auto j = nlohmann::json::parse(xlab("spectrum --json --space " + k3).out);
    CHECK(j["eigenvalues"].size() == 3);
}

TEST_CASE("convolution") {
    Workspace w("conv");
    const auto out = w.path("c.csv");
    const auto r = xlab("convolution --kmax 300 --powers 2,4,8 --out " + out);
    CHECK(r.code == 0);
    const auto csv = slurp(out);
    CHECK(csv.rfind("k,lambda,lower_bound,ratio\n0,", 0) == 0);
    const auto row0 = csv.substr(csv.find('\n') + 3);
    CHECK(std::stod(row0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(csv.find(",nan,nan\n") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 302);
    CHECK(xlab("convolution --kmax 10 --powers 2,x --out " + out).code == 2);
}

TEST_CASE("run") {
    Workspace w("run");
    const auto cfg = w.file("cfg.json", R"({"experiment": "noncompact-blocks", "params": {"K": 10}, "seed": 1})");
    const auto out = w.path("out");
    const auto r = xlab("run " + cfg + " --out " + out);
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS t(C_4)@K=10 measured=11 expected=11") != std::string::npos);
    const auto summary = nlohmann::json::parse(slurp(out + "/summary.json"));
    CHECK(summary["experiment"] == "noncompact-blocks");
    CHECK(summary["passed"] == true);
    CHECK(xlab("run " + cfg + " --out " + out).code == 2);
    CHECK(xlab("run " + cfg + " --out " + out + " --force").code == 0);

    const auto bad = w.file("bad.json", R"({"experiment": "noncompact-blocks", "params": {"K": 0}})");
    CHECK(xlab("run " + bad + " --out " + w.path("o2")).code == 2);
}
