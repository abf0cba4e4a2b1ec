#include "doctest.h"

#include <sstream>

#include "fixtures.hpp"
#include "tempdir.hpp"
#include "iconcode/cli.hpp"
#include "iconcode/raster.hpp"

using namespace iconcode;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

json frame(double x, double y, double w, double h) { return {{"x", x}, {"y", y}, {"w", w}, {"h", h}}; }

// Background, one two-part icon drawn from icon.png and its caption.
std::string icon_artifact() {
  json icon = {{"name", "icon"}, {"kind", "group"}, {"frame", frame(100, 100, 40, 40)},
               {"children", json::array({
                   {{"name", "base"}, {"kind", "bitmap"}, {"frame", frame(100, 100, 32, 32)}, {"image", "icon.png"}},
                   {{"name", "badge"}, {"kind", "bitmap"}, {"frame", frame(108, 108, 32, 32)}, {"image", "icon.png"}},
               })}};
  json root = {{"name", "root"}, {"kind", "group"}, {"frame", frame(0, 0, 800, 600)},
               {"children", json::array({
                   {{"name", "bg"}, {"kind", "bitmap"}, {"frame", frame(0, 0, 800, 600)}, {"image", "bg.png"}},
                   icon,
                   {{"name", "caption"}, {"kind", "text"}, {"frame", frame(100, 150, 60, 12)}, {"text", "Home"}},
               })}};
  return json{{"name", "screen"}, {"width", 800}, {"height", 600}, {"root", root}}.dump();
}

Raster blue_disk() {
  Raster r = fixtures::to_raster(fixtures::disk(32, 12));
  for (auto& p : r.pixels()) {
    if (p.a) p = {0, 0, 255, 255};
  }
  return r;
}

}  // namespace

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"compose", "x.json", "--no-such-flag"}).code == kExitUsage);
  CHECK(run({"eval"}).code == kExitUsage);
  const auto help = run({"--help"});
  CHECK(help.code == kExitOk);
  CHECK(help.out.find("compose") != std::string::npos);
}

TEST_CASE("missing input is an io error") {
  CHECK(run({"compose", "/nonexistent/missing.json"}).code == kExitIo);
  CHECK(run({"color", "/nonexistent/missing.png"}).code == kExitIo);
}

TEST_CASE("invalid input is a validation error") {
  TempDir dir;
  dir.write("bad.json", R"({"name": "x", "width": 10, "height": 10, "root": {"name": "r", "kind": "blob", "frame": {"x": 0, "y": 0, "w": 1, "h": 1}}})");
  CHECK(run({"compose", dir / "bad.json"}).code == kExitValidation);
  dir.write("a.json", icon_artifact());
  CHECK(run({"compose", dir / "a.json", "--weights", "-1,1,1"}).code == kExitValidation);
}

TEST_CASE("color prints the primary colour") {
  TempDir dir;
  write_png(Raster(16, 16, {0, 0, 255, 255}), dir / "solid_blue.png");
  const auto r = run({"color", dir / "solid_blue.png"});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "blue\n");
  write_png(Raster(4, 4), dir / "clear.png");
  CHECK(run({"color", dir / "clear.png"}).out == "none\n");
}

TEST_CASE("compose writes clusters") {
  TempDir dir;
  dir.write("a.json", icon_artifact());
  const auto r = run({"compose", dir / "a.json", "-o", dir / "out.json"});
  REQUIRE(r.code == kExitOk);
  const auto j = json::parse(dir.read("out.json"));
  CHECK(j["artifact"] == "screen");
  std::vector<json> accepted;
  for (const auto& c : j["clusters"]) {
    if (c["accepted"]) accepted.push_back(c["members"]);
  }
  REQUIRE(accepted.size() == 1);
  CHECK(accepted[0] == json::array({3, 4}));

  // Several artifacts go to a directory, one file each, independent of --jobs.
  dir.write("b.json", icon_artifact());
  REQUIRE(run({"compose", dir / "a.json", dir / "b.json", "-o", dir / "many", "-j", "2"}).code == kExitOk);
  CHECK(dir.read("many/a.clusters.json") == dir.read("out.json"));
  CHECK(dir.read("many/b.clusters.json") == dir.read("out.json"));
}

TEST_CASE("config file fills unset options") {
  TempDir dir;
  dir.write("a.json", icon_artifact());
  dir.write("cfg.json", R"({"threshold": 0.99})");
  REQUIRE(run({"--config", dir / "cfg.json", "compose", dir / "a.json", "-o", dir / "hi.json"}).code == kExitOk);
  for (const auto& c : json::parse(dir.read("hi.json"))["clusters"]) CHECK(c["members"].size() == 1);
  REQUIRE(run({"--config", dir / "cfg.json", "compose", dir / "a.json", "--threshold", "0.6", "-o", dir / "lo.json"}).code ==
          kExitOk);
  CHECK(json::parse(dir.read("lo.json"))["clusters"].size() < json::parse(dir.read("hi.json"))["clusters"].size());
}

TEST_CASE("trace writes svg") {
  TempDir dir;
  write_png(blue_disk(), dir / "disk.png");
  const auto r = run({"trace", dir / "disk.png"});
  REQUIRE(r.code == kExitOk);
  CHECK(r.out.rfind("<svg", 0) == 0);
  CHECK(run({"trace", dir / "disk.png", "-o", dir / "disk.svg"}).code == kExitOk);
  CHECK(dir.read("disk.svg") == r.out);
}

TEST_CASE("train, classify and generate") {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "train/home");
  std::filesystem::create_directories(dir.path() / "train/star");
  write_png(Raster(8, 8, {0, 0, 255, 255}), dir / "train/home/1.png");
  write_png(Raster(8, 8, {255, 0, 0, 255}), dir / "train/star/1.png");
  REQUIRE(run({"train", dir / "train", "-o", dir / "m.json"}).code == kExitOk);
  const auto model = json::parse(dir.read("m.json"));
  CHECK(model["labels"] == json::array({"home", "star"}));

  write_png(blue_disk(), dir / "icon.png");
  write_png(Raster(8, 6, {240, 240, 240, 255}), dir / "bg.png");
  const auto cls = run({"classify", dir / "icon.png", "--model", dir / "m.json", "-k", "1"});
  REQUIRE(cls.code == kExitOk);
  CHECK(cls.out.find("home") != std::string::npos);

  dir.write("fixture.json", icon_artifact());
  const auto gen = run({"generate", dir / "fixture.json", "--model", dir / "m.json", "-o", dir / "out"});
  REQUIRE(gen.code == kExitOk);
  for (const char* f : {"clusters.json", "glyphs/manifest.json", "icons.css", "index.html", "report.json"}) {
    CHECK_MESSAGE(std::filesystem::exists(dir.path() / "out" / f), f);
  }
  CHECK(dir.read("out/index.html").find(R"(<i class="icon-home blue"></i>)") != std::string::npos);
  CHECK(dir.read("out/icons.css").find(R"(content: "\e000")") != std::string::npos);
  const auto manifest = json::parse(dir.read("out/glyphs/manifest.json"));
  REQUIRE(manifest["glyphs"].size() == 1);
  CHECK(manifest["glyphs"][0]["codepoint"] == "U+E000");

  // Same inputs, different worker count: identical files.
  REQUIRE(run({"generate", dir / "fixture.json", "--model", dir / "m.json", "-o", dir / "out8", "-j", "8"}).code == kExitOk);
  for (const char* f : {"clusters.json", "glyphs/manifest.json", "icons.css", "index.html", "report.json"}) {
    CHECK(dir.read(std::string("out/") + f) == dir.read(std::string("out8/") + f));
  }
  CHECK(run({"generate", dir / "fixture.json", "-o", dir / "none"}).code == kExitValidation);
}

TEST_CASE("mine") {
  TempDir dir;
  std::string corpus;
  for (int i = 0; i < 10; ++i) corpus += R"({"icon": "i.png", "labels": ["home", "house"]})" "\n";
  corpus += R"({"icon": "j.png", "labels": ["star"]})" "\n";
  dir.write("corpus.jsonl", corpus);
  const auto r = run({"mine", dir / "corpus.jsonl"});
  REQUIRE(r.code == kExitOk);
  const auto j = json::parse(r.out);
  CHECK(j["rules"].size() == 2);
  CHECK(j["components"][0] == json::array({"home", "house"}));
}

TEST_CASE("eval subcommands") {
  TempDir dir;
  dir.write("c.txt", "a b c d");
  dir.write("r.txt", "a b c d e");
  const auto b = run({"eval", "bleu", "--candidate", dir / "c.txt", "--reference", dir / "r.txt"});
  REQUIRE(b.code == kExitOk);
  CHECK(json::parse(b.out)["bleu"].get<double>() == doctest::Approx(std::exp(-0.25)));

  dir.write("p.jsonl", R"({"icon": "a", "label": "home", "score": 0.9})" "\n" R"({"icon": "b", "label": "star", "score": 0.8})" "\n");
  dir.write("t.jsonl", R"({"icon": "a", "label": "home"})" "\n" R"({"icon": "b", "label": "home"})" "\n");
  const auto c = run({"eval", "classify", "--predictions", dir / "p.jsonl", "--truth", dir / "t.jsonl"});
  REQUIRE(c.code == kExitOk);
  CHECK(json::parse(c.out)["accuracy"].get<double>() == doctest::Approx(0.5));

  const auto synth = fixtures::composition_artifact(3, 0);
  dir.write("art.json", synth.json_text);
  dir.write("truth.json", json{{"artifact", synth.truth.artifact}, {"icons", synth.truth.icons}}.dump());
  const auto e = run({"eval", "compose", dir / "art.json", "--truth", dir / "truth.json", "-o", dir / "report.json"});
  REQUIRE(e.code == kExitOk);
  CHECK(e.out.find("Ours") != std::string::npos);
  CHECK(std::filesystem::exists(dir.path() / "report.json"));
}
