// Command-line driver for scene files.
//
//   autpert run [flags] SCENE...     run scenes, print reports
//   autpert parse SCENE...           print the normalized program
//
// Exit codes: 0 ok, 1 a construction or check failed, 2 parse, binding or
// type error, 3 internal error.

#include "autpert/dsl.hpp"
#include "autpert/runner.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw autpert::Error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Perturbations of domains with prescribed automorphisms"};
  app.require_subcommand(1);

  autpert::RunOptions opt;
  std::string format = "kv";
  std::string out_dir;
  std::vector<std::string> files;

  CLI::App* run = app.add_subcommand("run", "Run scene files");
  run->add_option("scenes", files, "Scene files")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
  run->add_option("--tol", opt.tol, "Check tolerance")->capture_default_str();
  run->add_option("--resolution", opt.resolution, "Boundary resolution for planar regions")->capture_default_str();
  run->add_option("--resolution-nd", opt.resolution_nd, "Resolution floor in C^n, n >= 2")->capture_default_str();
  run->add_option("--samples", opt.samples, "Interior samples per check")->capture_default_str();
  run->add_option("--out", out_dir, "Directory for renders and report files");
  run->add_option("--format", format, "Report format")->check(CLI::IsMember({"kv", "json"}))->capture_default_str();
  run->add_flag("--timing", opt.timing, "Include elapsedMs in reports");

  CLI::App* parse = app.add_subcommand("parse", "Parse scene files and print them normalized");
  parse->add_option("scenes", files, "Scene files")->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  int exit_code = 0;
  std::string current;
  try {
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      opt.out_dir = out_dir;
    }
    for (const auto& file : files) {
      current = file;
      const autpert::dsl::Program program = autpert::dsl::parse(read_file(file));
      if (parse->parsed()) {
        autpert::check_bindings(program);
        std::cout << autpert::dsl::print(program);
        continue;
      }
      const autpert::RunReport report = autpert::run(program, opt);
      const std::string text = format == "json" ? autpert::to_json(report, opt.timing) : autpert::to_kv(report, opt.timing);
      if (files.size() > 1 && format == "kv") std::cout << "scene=" << file << "\n";
      std::cout << text;
      if (!out_dir.empty()) {
        const std::string name = std::filesystem::path(file).stem().string() + ".report." + format;
        std::ofstream(std::filesystem::path(out_dir) / name, std::ios::binary) << text;
      }
      exit_code = std::max(exit_code, report.exit_code());
    }
  } catch (const autpert::dsl::ParseError& e) {
    std::cerr << current << ":" << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << current << ": internal error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
