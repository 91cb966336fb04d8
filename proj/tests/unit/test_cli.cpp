#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "spiderpcg/cli.hpp"
#include "spiderpcg/virtual_subjects.hpp"

using namespace spiderpcg;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation cli(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

class TempDir {
public:
    TempDir()
    {
        static int counter = 0;
        path_ = fs::temp_directory_path() / ("spiderpcg_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }

    std::string file(const std::string& name) const { return (path_ / name).string(); }

private:
    fs::path path_;
};

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t line_count(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("sha256")
{
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("gen-subjects")
{
    TempDir dir;
    const auto a = cli({"gen-subjects", "--n", "20", "--seed", "42", "--out", dir.file("a.json")});
    const auto b = cli({"gen-subjects", "--n", "20", "--seed", "42", "--out", dir.file("b.json")});
    REQUIRE(a.code == kExitOk);
    REQUIRE(b.code == kExitOk);
    CHECK(slurp(dir.file("a.json")) == slurp(dir.file("b.json")));
    CHECK(a.out.find("sha256 " + sha256_hex(slurp(dir.file("a.json")))) != std::string::npos);
    CHECK(load_subjects(dir.file("a.json")).size() == 20);

    CHECK(cli({"gen-subjects", "--n", "1", "--seed", "1", "--out", dir.file("one.json")}).code == kExitOk);
    CHECK(load_subjects(dir.file("one.json")).size() == 1);

    CHECK(cli({"gen-subjects", "--n", "5", "--out", dir.file("c.json")}).code == kExitUsage);
    CHECK(cli({"gen-subjects", "--n", "0", "--seed", "1", "--out", dir.file("c.json")}).code == kExitUsage);
    CHECK(cli({"gen-subjects", "--seed", "1", "--out", dir.file("missing/dir/c.json")}).code == kExitData);
    CHECK(cli({"no-such-command"}).code == kExitUsage);
}

TEST_CASE("run, summarize and compare")
{
    TempDir dir;
    REQUIRE(cli({"gen-subjects", "--n", "100", "--seed", "42", "--out", dir.file("s.json")}).code == kExitOk);

    const auto r = cli({"run", "--subjects", dir.file("s.json"), "--methods", "random", "--repeats", "1", "--seed", "7",
                        "--out", dir.file("random.csv")});
    REQUIRE(r.code == kExitOk);
    CHECK(line_count(slurp(dir.file("random.csv"))) == 2700 + 1);

    const auto md = cli({"summarize", "--results", dir.file("random.csv")});
    REQUIRE(md.code == kExitOk);
    CHECK(line_count(md.out) == 9 + 2);
    const auto csv = cli({"summarize", "--results", dir.file("random.csv"), "--format", "csv"});
    REQUIRE(csv.code == kExitOk);
    CHECK(line_count(csv.out) == 9 + 1);
    CHECK(cli({"compare", "--results", dir.file("random.csv")}).code == kExitOk);
    CHECK(cli({"summarize", "--results", dir.file("random.csv"), "--format", "xml"}).code == kExitUsage);
    CHECK(cli({"summarize", "--results", dir.file("random.csv"), "--std-mode", "per_target"}).code == kExitOk);

    SUBCASE("full rl_zero grid")
    {
        REQUIRE(cli({"run", "--subjects", dir.file("s.json"), "--methods", "rl_zero", "--seed", "7", "--workers", "2",
                     "--out", dir.file("rl.csv")})
                    .code
                == kExitOk);
        CHECK(line_count(slurp(dir.file("rl.csv"))) == 27000 + 1);
    }

    SUBCASE("single cell")
    {
        REQUIRE(cli({"run", "--subjects", dir.file("s.json"), "--methods", "ga", "--initials", "max", "--targets",
                     "8", "--repeats", "1", "--seed", "7", "--out", dir.file("one.csv")})
                    .code
                == kExitOk);
        const auto one = cli({"summarize", "--results", dir.file("one.csv"), "--format", "csv"});
        CHECK(line_count(one.out) == 2);
    }

    CHECK(cli({"run", "--subjects", dir.file("s.json"), "--methods", "sgd", "--seed", "1", "--out",
               dir.file("x.csv")})
              .code
          == kExitUsage);
    CHECK(cli({"run", "--subjects", dir.file("s.json"), "--methods", "ga", "--out", dir.file("x.csv")}).code
          == kExitUsage);

    std::ofstream(dir.file("bad.json")) << "{\"subjects\": [1, 2";
    CHECK(cli({"run", "--subjects", dir.file("bad.json"), "--methods", "ga", "--seed", "1", "--out",
               dir.file("x.csv")})
              .code
          == kExitData);

    std::ofstream(dir.file("empty.csv"))
        << "method,initial_kind,target,subject_id,repeat,success,spiders_presented,iterations_used\n";
    CHECK(cli({"summarize", "--results", dir.file("empty.csv")}).code == kExitData);
    CHECK(cli({"summarize", "--results", dir.file("nope.csv")}).code == kExitData);
}

TEST_CASE("oracle")
{
    TempDir dir;
    // Single-attribute subject: stress 0, 5 or 10 only.
    std::ofstream(dir.file("coarse.json")) << subjects_to_json(
        SubjectPopulation{0, {VirtualSubject::from_weights(0, {1, 0, 0, 0, 0, 0})}});
    const auto none = cli({"oracle", "--subjects", dir.file("coarse.json"), "--subject-id", "0", "--target", "3"});
    REQUIRE(none.code == kExitOk);
    CHECK(none.out.find("success states: 0") != std::string::npos);
    CHECK(none.out.find("bfs distance: unreachable") != std::string::npos);

    const auto zero = cli({"oracle", "--subjects", dir.file("coarse.json"), "--subject-id", "0", "--target", "5",
                           "--initial", "avg"});
    REQUIRE(zero.code == kExitOk);
    CHECK(zero.out.find("bfs distance: 0") != std::string::npos);

    std::ofstream(dir.file("example.json")) << subjects_to_json(
        SubjectPopulation{0, {VirtualSubject::from_weights(0, {0.97, 0.87, 0.07, 0.63, 0.67, 0.77})}});
    const auto one = cli({"oracle", "--subjects", dir.file("example.json"), "--subject-id", "0", "--target", "1"});
    REQUIRE(one.code == kExitOk);
    CHECK(one.out.find("bfs distance: 1\n") != std::string::npos);

    CHECK(cli({"oracle", "--subjects", dir.file("example.json"), "--subject-id", "0", "--target", "10"}).code
          == kExitUsage);
    CHECK(cli({"oracle", "--subjects", dir.file("example.json"), "--subject-id", "4", "--target", "2"}).code
          != kExitOk);
}

TEST_CASE("trace")
{
    TempDir dir;
    REQUIRE(cli({"gen-subjects", "--n", "3", "--seed", "5", "--out", dir.file("s.json")}).code == kExitOk);
    const auto t = cli({"trace", "--subjects", dir.file("s.json"), "--method", "ga", "--subject-id", "1", "--target",
                        "6", "--initial", "min", "--seed", "11"});
    REQUIRE(t.code == kExitOk);
    std::istringstream lines(t.out);
    std::string line;
    int n = 0;
    int last_iteration = -1;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.at("state").size() == 6);
        CHECK(j.contains("stress"));
        CHECK(j.contains("reward"));
        CHECK(j.at("iteration").get<int>() >= last_iteration);
        last_iteration = j.at("iteration").get<int>();
        ++n;
    }
    CHECK(n >= 1);
    const auto again = cli({"trace", "--subjects", dir.file("s.json"), "--method", "ga", "--subject-id", "1",
                            "--target", "6", "--initial", "min", "--seed", "11"});
    CHECK(again.out == t.out);

    const auto all = cli({"trace", "--subjects", dir.file("s.json"), "--method", "rl_zero", "--seed", "11"});
    REQUIRE(all.code == kExitOk);
    CHECK(all.out.find("\"subject_id\":2") != std::string::npos);
    CHECK(cli({"trace", "--subjects", dir.file("s.json"), "--method", "dqn", "--seed", "1"}).code == kExitUsage);
}
