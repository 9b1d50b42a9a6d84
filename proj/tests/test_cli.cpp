#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

#include "cl15/calculus.hpp"
#include "cl15/harness.hpp"
#include "support.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

std::string quote(const std::string& s) {
    std::string q = "'";
    for (char c : s) q += c == '\'' ? std::string("'\\''") : std::string(1, c);
    return q + "'";
}

Result cli(const std::vector<std::string>& args, const std::string& input = "") {
    std::string cmd = quote(CL15_CLI_PATH);
    for (const auto& a : args) cmd += " " + quote(a);
    cmd += " 2>/dev/null";
    if (!input.empty()) cmd = "printf '%s' " + quote(input) + " | " + cmd;
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string corpus_file(const std::string& name) { return (cl15::testing::corpus_dir() / name / "proof.cl15").string(); }

// Enough of JSON Schema for the shipped schemas: type, enum, required,
// properties, additionalProperties, items, minimum, minItems, pattern, $ref.
class Validator {
public:
    explicit Validator(const std::string& file) : root_(load(file)) {}

    std::vector<std::string> errors(const json& doc) {
        errs_.clear();
        check(root_, doc, "$");
        return errs_;
    }

private:
    static json load(const std::string& file) { return json::parse(std::ifstream(fs::path(CL15_SCHEMA_DIR) / file)); }

    static bool has_type(const json& v, const std::string& t) {
        if (t == "object") return v.is_object();
        if (t == "array") return v.is_array();
        if (t == "string") return v.is_string();
        if (t == "integer") return v.is_number_integer();
        if (t == "number") return v.is_number();
        if (t == "boolean") return v.is_boolean();
        if (t == "null") return v.is_null();
        return false;
    }

    void check(const json& s, const json& v, const std::string& at) {
        if (s.contains("$ref")) return check(load(s["$ref"].get<std::string>()), v, at);
        if (s.contains("type") && !has_type(v, s["type"].get<std::string>())) {
            errs_.push_back(at + ": expected " + s["type"].get<std::string>());
            return;
        }
        if (s.contains("enum") && std::find(s["enum"].begin(), s["enum"].end(), v) == s["enum"].end())
            errs_.push_back(at + ": " + v.dump() + " not in enum");
        if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
            errs_.push_back(at + ": below minimum");
        if (s.contains("pattern") && v.is_string() &&
            !std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>())))
            errs_.push_back(at + ": pattern mismatch");
        if (v.is_object()) {
            for (const auto& k : s.value("required", json::array()))
                if (!v.contains(k.get<std::string>())) errs_.push_back(at + ": missing " + k.get<std::string>());
            const json props = s.value("properties", json::object());
            for (const auto& [k, sub] : v.items()) {
                if (props.contains(k)) check(props[k], sub, at + "." + k);
                else if (s.value("additionalProperties", true) == false) errs_.push_back(at + ": unexpected " + k);
            }
        }
        if (v.is_array()) {
            if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>()) errs_.push_back(at + ": too few items");
            if (s.contains("items"))
                for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], at + "[" + std::to_string(i) + "]");
        }
    }

    json root_;
    std::vector<std::string> errs_;
};

void expect_valid(const std::string& schema, const std::string& text) {
    json doc;
    ASSERT_NO_THROW(doc = json::parse(text)) << text;
    const auto errs = Validator(schema).errors(doc);
    EXPECT_TRUE(errs.empty()) << schema << ": " << (errs.empty() ? "" : errs.front()) << "\n" << text;
}

struct TempFile {
    fs::path path;
    explicit TempFile(const std::string& content) {
        path = fs::temp_directory_path() /
               ("cl15-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) + ".txt");
        std::ofstream(path) << content;
    }
    ~TempFile() { fs::remove(path); }
};

TEST(Validator, RejectsBadDocuments) {
    Validator v("eval.json");
    EXPECT_TRUE(v.errors(json::parse(R"({"game":"P","run":[],"legal":true,"offender":null,"winner":"T"})")).empty());
    EXPECT_FALSE(v.errors(json::parse(R"({"game":"P","run":[],"legal":true,"offender":null})")).empty());
    EXPECT_FALSE(v.errors(json::parse(R"({"game":"P","run":[],"legal":1,"offender":null,"winner":"T"})")).empty());
    EXPECT_FALSE(v.errors(json::parse(R"({"game":"P","run":[{"player":"X","move":""}],"legal":true,"offender":null,"winner":"T"})")).empty());
    EXPECT_FALSE(v.errors(json::parse(R"({"game":"P","run":[],"legal":true,"offender":null,"winner":"T","x":0})")).empty());
}

TEST(Cli, CheckCorpus) {
    for (const auto& e : cl15::testing::load_corpus()) {
        const auto text = cli({"check", corpus_file(e.name)});
        EXPECT_EQ(text.code, 0) << e.name;
        EXPECT_EQ(text.out.rfind("OK", 0), 0u) << text.out;
        const auto j = cli({"check", corpus_file(e.name), "--json"});
        EXPECT_EQ(j.code, 0);
        expect_valid("check.json", j.out);
        EXPECT_TRUE(json::parse(j.out).at("ok").get<bool>());
    }
}

TEST(Cli, CheckRejectsBrokenProofs) {
    cl15::Proof p = cl15::parse_proof(cl15::read_file(corpus_file("ex52_conj_elim")));
    p.steps[2].cirquent = p.steps[1].cirquent;
    TempFile bad(cl15::print_proof(p));
    const auto r = cli({"check", bad.path.string(), "--json"});
    EXPECT_EQ(r.code, 1);
    expect_valid("check.json", r.out);
    const auto j = json::parse(r.out);
    EXPECT_FALSE(j.at("ok").get<bool>());
    EXPECT_EQ(j.at("step").get<int>(), 3);

    TempFile garbage("step 1 { rule: Nope; }");
    const auto g = cli({"check", garbage.path.string(), "--json"});
    EXPECT_EQ(g.code, 1);
    expect_valid("check.json", g.out);
    EXPECT_EQ(cli({"check", "/nonexistent/proof.cl15"}).code, 1);
}

TEST(Cli, Compile) {
    const auto r = cli({"compile", corpus_file("ex51_brec_elim"), "--json"});
    EXPECT_EQ(r.code, 0);
    expect_valid("compile.json", r.out);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("formula"), "?~F | F");
    EXPECT_EQ(j.at("rules"), json({"Axiom", "CorecIntro", "DisjIntro"}));
    EXPECT_EQ(cli({"compile", corpus_file("ex51_brec_elim")}).code, 0);
}

TEST(Cli, Play) {
    for (const char* env : {"random", "spoiler"}) {
        const auto r = cli({"play", corpus_file("ex53_brec_dup"), "--game", "Dialog", "--env", env, "--seed", "5", "--json"});
        EXPECT_EQ(r.code, 0) << r.out;
        expect_valid("play.json", r.out);
        EXPECT_EQ(json::parse(r.out).at("verdict"), "T");
    }
    // Same seed, same run.
    EXPECT_EQ(cli({"play", corpus_file("blass"), "--game", "Echo", "--seed", "9"}).out,
              cli({"play", corpus_file("blass"), "--game", "Echo", "--seed", "9"}).out);
    EXPECT_EQ(cli({"play", corpus_file("blass"), "--game", "NoSuchGame"}).code, 2);
    EXPECT_EQ(cli({"play", corpus_file("blass"), "--env", "oracle"}).code, 2);
}

TEST(Cli, Eval) {
    const auto r = cli({"eval", "--game", "P|~P", "--run", "B:1.m", "--json"});
    EXPECT_EQ(r.code, 0);
    expect_valid("eval.json", r.out);
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j.at("legal").get<bool>());
    EXPECT_EQ(j.at("winner"), "B");

    const auto bad = cli({"eval", "--game", "P|~P", "--run", "B:2.m", "--json"});
    expect_valid("eval.json", bad.out);
    EXPECT_EQ(json::parse(bad.out).at("offender"), "B");
    EXPECT_EQ(json::parse(bad.out).at("winner"), "T");

    const auto bound = cli({"eval", "--game", "P & Q", "--run", "T:0.m", "--bind", "P=Give", "--uniform", "Truth", "--json"});
    EXPECT_EQ(json::parse(bound.out).at("winner"), "T");
    EXPECT_EQ(cli({"eval", "--game", "P &", "--run", ""}).code, 2);
    EXPECT_EQ(cli({"eval", "--game", "P", "--run", "X:m"}).code, 2);
}

TEST(Cli, FuseAndDefuse) {
    EXPECT_EQ(cli({"fuse", "000", "1111"}).out, "01010101 01010111\n");
    EXPECT_EQ(cli({"fuse", "11", "00", "111"}).out, "101101001 101101011 101101101 101101111\n");
    EXPECT_EQ(cli({"defuse", "01011010"}).out, "0011 1100\n");
    EXPECT_EQ(cli({"defuse", "01011010", "--n", "3"}).out, "011 110 00\n");
    EXPECT_EQ(cli({"defuse", "0", "--n", "2"}).out, "0 ε\n");
    const auto fj = cli({"fuse", "", "1", "--json"});
    expect_valid("fuse.json", fj.out);
    EXPECT_EQ(json::parse(fj.out).at("fusions"), json({"01", "11"}));
    expect_valid("defuse.json", cli({"defuse", "0110", "--n", "3", "--json"}).out);
    EXPECT_EQ(cli({"fuse", "012"}).code, 2);
    EXPECT_EQ(cli({"defuse", "01", "--n", "0"}).code, 2);
    // More than twenty free positions.
    EXPECT_EQ(cli({"fuse", "", std::string(22, '0')}).code, 3);
}

TEST(Cli, Corpus) {
    const auto r = cli({"corpus", cl15::testing::corpus_dir().string(), "--rollouts", "1", "--spoiler", "0", "--json"});
    EXPECT_EQ(r.code, 0);
    expect_valid("corpus.json", r.out);
    EXPECT_EQ(json::parse(r.out).at("cases").size(), 7u);

    const fs::path empty = fs::temp_directory_path() / "cl15-cli-empty-corpus";
    fs::create_directories(empty);
    const auto e = cli({"corpus", empty.string(), "--json"});
    fs::remove_all(empty);
    EXPECT_EQ(e.code, 0);
    expect_valid("corpus.json", e.out);
    EXPECT_TRUE(json::parse(e.out).at("cases").empty());
}

TEST(Cli, Repl) {
    const auto r = cli({"repl", corpus_file("ex51_brec_elim"), "--game", "Dialog"}, "1.q\n0.zz\nquit\n");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("T: 0..q"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("rejected: B:0.zz"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("winner: T"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli({}).code, 2);
    EXPECT_EQ(cli({"frobnicate"}).code, 2);
    EXPECT_EQ(cli({"check"}).code, 2);
    EXPECT_EQ(cli({"check", corpus_file("blass"), "--bogus"}).code, 2);
    EXPECT_EQ(cli({"--help"}).code, 0);
}

} // namespace
