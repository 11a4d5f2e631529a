#include "../support/fixtures.hpp"

#include "cli/cli.hpp"
#include "cpcross/corpus.hpp"
#include "cpcross/exel.hpp"
#include "cpcross/io.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace cpcross;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
    Json json() const { return Json::parse(out); }
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return fx::path(name); }

std::string temp_file(const std::string& name, const std::string& content)
{
    auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << content;
    return path.string();
}

}  // namespace

TEST_CASE("classify the two-loop graph with uniform weights")
{
    auto r = call({"graph", "classify", fixture("g_2loop.json"), "--lambda", "uniform", "--depth", "3"});
    REQUIRE(r.code == 0);
    auto j = r.json();
    CHECK(j["is_exel"] == true);
    CHECK(j["is_regular"] == true);
    CHECK(j["is_corner"] == false);
    CHECK(j["lambda"]["e"] == "1/2");
    CHECK(j["transfer_identity"]["passed"] == true);
}

TEST_CASE("unnormalized weights are reported with the scaling witness")
{
    auto r = call({"graph", "classify", fixture("g_2loop.json"), "--lambda", "1"});
    REQUIRE(r.code == 0);
    auto j = r.json();
    CHECK(j["is_regular"] == false);
    CHECK(j["witness"]["factor"] == "2");
}

TEST_CASE("correspondence of the half matrix")
{
    auto r = call({"cp", "correspondence", fixture("m_half.json")});
    REQUIRE(r.code == 0);
    auto j = r.json();
    CHECK(j["dimension"] == 3);
    CHECK(j["left_kernel"].empty());
    CHECK(call({"cp", "correspondence", fixture("m_half.csv")}).json()["dimension"] == 3);
}

TEST_CASE("input errors exit with 1")
{
    auto r = call({"graph", "ideals", "missing.json"});
    CHECK(r.code == 1);
    CHECK(r.err.find("file not found") != std::string::npos);
    CHECK(r.out.empty());

    auto bad = call({"graph", "classify", temp_file("cpcross_bad.json", "{\"vertices\": [")});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("malformed JSON") != std::string::npos);

    auto sub = call({"graph", "frobnicate"});
    CHECK(sub.code == 1);
    CHECK(sub.err.find("unknown subcommand") != std::string::npos);

    auto dec = call({"graph", "classify", fixture("g_2loop.json"), "--lambda", "0.5"});
    CHECK(dec.code == 1);
    CHECK(call({"graph", "classify", fixture("g_2loop.json"), "--lambda", "0.5", "--float"}).code == 0);
}

TEST_CASE("mathematical negatives exit with 2")
{
    CHECK(call({"cp", "analyze", fixture("m_half.json"), "--subalgebra", fixture("b_constants.json")}).code == 2);
    CHECK(call({"exel", "enumerate-regular", fixture("m_non_ideal.json")}).code == 2);
    CHECK(call({"graph", "check-lambda", "--lazy", "star"}).code == 2);
    CHECK(call({"graph", "check-lambda", "--lazy", "rose", "--ratio", "1/2"}).code == 0);

    auto wrong = call({"graph", "represent", fixture("g_fork.json"), "--transfer-lambda", "1/2"});
    CHECK(wrong.code == 2);
    CHECK(wrong.json()["verification"]["passed"] == false);
}

TEST_CASE("representation reports")
{
    auto fork = call({"graph", "represent", fixture("g_fork.json")});
    REQUIRE(fork.code == 0);
    auto j = fork.json();
    CHECK(j["representation"]["kind"] == "boundary");
    CHECK(j["u"]["mode"] == "float128");
    CHECK(j["covariance_ideals"].size() == 2);

    auto line = call({"graph", "represent", fixture("g_line.json"), "--matrices"});
    REQUIRE(line.code == 0);
    auto l = line.json();
    CHECK(l["u"]["matrix"].size() == 2);
    CHECK(l["matrices"]["S"]["e"].size() == 2);
    CHECK(l["gauge"]["scaling_holds"] == true);

    auto loop = call({"graph", "represent", fixture("g_2loop.json"), "--depth", "3"});
    CHECK(loop.code == 0);
    CHECK(loop.json()["verification"]["interior_only"] == true);
}

TEST_CASE("enumeration and alpha checks")
{
    auto r = call({"exel", "enumerate-regular", fixture("m_shift.json"), "--alpha", fixture("alpha_shift.json")});
    REQUIRE(r.code == 0);
    auto j = r.json();
    CHECK(j["count"] == 2);
    CHECK(j["alpha"]["pair"]["is_exel"] == true);

    // alpha(a) = a(0) 1 is a second, unital partner of the shift.
    auto unital = call({"exel", "enumerate-regular", fixture("m_shift.json"), "--alpha", fixture("m_kill.json")});
    REQUIRE(unital.code == 0);
    CHECK(unital.json()["alpha"]["pair"]["is_corner"] == false);
    CHECK(unital.json()["alpha"]["module"]["isometric"] == true);

    auto not_endo = call({"exel", "enumerate-regular", fixture("m_shift.json"), "--alpha", fixture("m_half.json")});
    CHECK(not_endo.code == 2);
    CHECK(not_endo.json()["alpha"]["is_endomorphism"] == false);
    CHECK(not_endo.json()["alpha"]["witness"].get<std::string>().find("row 0") != std::string::npos);

    auto identity = call({"exel", "enumerate-regular", fixture("m_shift.json"), "--alpha",
                          temp_file("cpcross_id.json", "[[1,0],[0,1]]")});
    CHECK(identity.code == 2);
    CHECK(identity.json()["alpha"]["pair"]["is_exel"] == false);

    CHECK(call({"exel", "enumerate-regular", fixture("m_shift.json"), "--alpha", fixture("m_non_ideal.json")}).code == 1);
}

TEST_CASE("graph inputs to the finite-map commands use the truncation")
{
    auto r = call({"exel", "enumerate-regular", fixture("g_line.json"), "--depth", "1"});
    auto j = r.json();
    CHECK(j["truncation"]["atoms"].size() == j["points"].get<std::size_t>());
}

TEST_CASE("reports are byte-identical across runs")
{
    const std::vector<std::vector<std::string>> commands = {
        {"graph", "classify", fixture("g_fork.json")},
        {"graph", "ideals", fixture("g_fork.json")},
        {"graph", "represent", fixture("g_2loop.json"), "--depth", "2"},
        {"cp", "analyze", fixture("m_half.json")},
        {"cp", "quiver", fixture("m_half.json")},
        {"fixtures", "list", "--classify", "--depth", "2", "--jobs", "3"},
    };
    for (const auto& c : commands) {
        auto a = call(c);
        auto b = call(c);
        CHECK(a.out == b.out);
        CHECK(a.code == b.code);
        CHECK_FALSE(a.out.empty());
    }
    CHECK(call({"fixtures", "list", "--classify", "--depth", "2", "--jobs", "1"}).out ==
          call({"fixtures", "list", "--classify", "--depth", "2", "--jobs", "4"}).out);
}

TEST_CASE("property: uniform weights classify as regular")
{
    for (const auto& entry : full_corpus()) {
        auto path = temp_file("cpcross_uniform.json", graph_to_json(*entry.graph).dump());
        auto r = call({"graph", "classify", path, "--lambda", "uniform", "--depth", "2"});
        REQUIRE(r.code == 0);
        auto j = r.json();
        CHECK_MESSAGE(j["is_regular"] == true, entry.name);
        CHECK(j["is_regular"] == classify_system(entry.graph, WeightSystem::uniform(*entry.graph), 2).is_regular);
    }
}

TEST_CASE("config manifests select subcommands and supply options")
{
    auto manifest = temp_file("cpcross_manifest.json",
                              Json{{"graph", {{"classify", {{"file", fixture("g_2loop.json")}, {"lambda", "1"}, {"depth", 2}}}}}}.dump());
    auto r = call({"--config", manifest});
    REQUIRE(r.code == 0);
    CHECK(r.json()["is_regular"] == false);
    CHECK(r.json()["depth"] == 2);

    auto overridden = call({"graph", "classify", "--config", manifest, "--lambda", "uniform"});
    REQUIRE(overridden.code == 0);
    CHECK(overridden.json()["is_regular"] == true);

    CHECK(call({"--config", "no_such_manifest.json", "graph", "classify", fixture("g_line.json")}).code == 1);
}

TEST_CASE("table output")
{
    auto r = call({"graph", "classify", fixture("g_line.json"), "--table"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("is_corner: true") != std::string::npos);
    CHECK(r.out.find("methods.corner_identity: true") != std::string::npos);
}

TEST_CASE("fixtures list")
{
    auto j = call({"fixtures", "list"}).json();
    REQUIRE(j["fixtures"].size() == 24);
    CHECK(j["fixtures"][0]["name"] == "G_line");
    CHECK(j["fixtures"][4]["name"] == "R1_acyclic");
    CHECK(j["fixtures"][4]["seed"] == 20240917);
}
