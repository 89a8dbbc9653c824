// Command-line frontend. Reads JSON entity files, drives the shared
// library through its C API and writes JSON results to stdout or a file.
#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "qmc/qmc.h"

namespace {

struct EntityDeleter {
  void operator()(qmc_entity* e) const { qmc_entity_free(e); }
};
using EntityPtr = std::unique_ptr<qmc_entity, EntityDeleter>;

struct StringDeleter {
  void operator()(char* s) const { qmc_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct Options {
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::string out_path;  // empty = stdout
  int max_outcomes = 8;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("input", "cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_output(const Options& opts, const std::string& text) {
  if (opts.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(opts.out_path, std::ios::binary);
  if (!out) throw CLI::ValidationError("--out", "cannot open file: " + opts.out_path);
  out << text;
}

// Prints the error document and converts the status into an exit code.
int report_failure(const Options& opts, qmc_status status, const CString& error) {
  if (error) {
    write_output(opts, error.get());
  } else {
    write_output(opts, std::string("{\"error\":{\"code\":\"") + qmc_status_name(status) +
                           "\",\"message\":\"unknown failure\"}}\n");
  }
  return static_cast<int>(status);
}

EntityPtr parse_file(const Options& opts, const std::string& path, int& exit_code) {
  const std::string text = read_file(path);
  qmc_entity* raw = nullptr;
  char* err = nullptr;
  const qmc_status status = qmc_entity_parse(text.c_str(), opts.tol, &raw, &err);
  CString error(err);
  if (status != QMC_OK) {
    exit_code = report_failure(opts, status, error);
    return nullptr;
  }
  return EntityPtr(raw);
}

int emit_entity_result(const Options& opts, qmc_status status, qmc_entity* result,
                       CString& error) {
  if (status != QMC_OK) return report_failure(opts, status, error);
  EntityPtr holder(result);
  char* json = nullptr;
  const qmc_status ser = qmc_entity_serialize(holder.get(), &json);
  CString text(json);
  if (ser != QMC_OK) return report_failure(opts, ser, text);
  write_output(opts, text.get());
  return 0;
}

int emit_json_result(const Options& opts, qmc_status status, CString& json, CString& error) {
  if (status != QMC_OK) return report_failure(opts, status, error);
  write_output(opts, json.get());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional quantum measurement calculus"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opts;
  app.add_option("--tol", opts.tol, "numerical tolerance")->capture_default_str();
  app.add_option("--seed", opts.seed, "random seed")->capture_default_str();
  app.add_option("--out", opts.out_path, "output path (default: stdout)");
  app.add_option("--max-outcomes", opts.max_outcomes, "partition enumeration cap")
      ->capture_default_str();

  std::string file_a, file_b, parent_path, state_path, events_json;
  std::vector<std::string> member_paths;
  int dim_n1 = 0, dim_n2 = 0, side = 1;
  bool commuting = false, timings = false;

  auto* validate = app.add_subcommand("validate", "parse and validate an entity file");
  validate->add_option("file", file_a)->required();

  auto* measure = app.add_subcommand(
      "measure", "hat map: instrument -> observable, model -> instrument");
  measure->add_option("file", file_a)->required();

  auto* parts = app.add_subcommand("parts", "enumerate the parts of an observable");
  parts->add_option("file", file_a)->required();

  auto* part_check = app.add_subcommand("part-check", "test whether child is part of parent");
  part_check->add_option("child", file_a)->required();
  part_check->add_option("parent", file_b)->required();

  auto* coexist = app.add_subcommand("coexist", "coexistence inside a parent, or a commuting joint");
  coexist->add_option("members", member_paths, "member entity files")->expected(-1);
  coexist->add_option("--parent", parent_path, "common parent entity file");
  coexist->add_flag("--commuting", commuting, "build the joint of two commuting observables");
  coexist->add_option("--state", state_path, "state file for a joint probability");
  coexist->add_option("--events", events_json, "JSON array with one label array per member");

  auto* reduce = app.add_subcommand("reduce", "reduce an entity to one factor of its base");
  reduce->add_option("file", file_a)->required();
  reduce->add_option("--n1", dim_n1, "first factor dimension")->required();
  reduce->add_option("--n2", dim_n2, "second factor dimension")->required();
  reduce->add_option("--side", side, "factor to keep (1 or 2)")->capture_default_str();

  auto* tensor_cmd = app.add_subcommand("tensor", "tensor composite of two entities");
  tensor_cmd->add_option("left", file_a)->required();
  tensor_cmd->add_option("right", file_b)->required();

  auto* mm_run = app.add_subcommand("mm-run", "model instrument and observable of a model");
  mm_run->add_option("file", file_a)->required();

  auto* suite = app.add_subcommand("theorem-suite", "run the verification suite");
  suite->add_flag("--timings", timings, "include per-check runtimes in the report");

  CLI11_PARSE(app, argc, argv);

  try {
    int exit_code = 0;
    if (validate->parsed()) {
      EntityPtr entity = parse_file(opts, file_a, exit_code);
      if (!entity) return exit_code;
      char* json = nullptr;
      const qmc_status status = qmc_entity_describe(entity.get(), &json);
      CString text(json);
      if (status != QMC_OK) return report_failure(opts, status, text);
      auto body = nlohmann::ordered_json::parse(text.get());
      body["status"] = "valid";
      write_output(opts, body.dump(2) + "\n");
      return 0;
    }

    if (measure->parsed()) {
      EntityPtr entity = parse_file(opts, file_a, exit_code);
      if (!entity) return exit_code;
      qmc_entity* result = nullptr;
      char* err = nullptr;
      const qmc_status status = qmc_measure(entity.get(), opts.tol, &result, &err);
      CString error(err);
      return emit_entity_result(opts, status, result, error);
    }

    if (parts->parsed()) {
      EntityPtr entity = parse_file(opts, file_a, exit_code);
      if (!entity) return exit_code;
      char* json = nullptr;
      char* err = nullptr;
      const qmc_status status =
          qmc_enumerate_parts(entity.get(), opts.tol, opts.max_outcomes, &json, &err);
      CString text(json);
      CString error(err);
      return emit_json_result(opts, status, text, error);
    }

    if (part_check->parsed()) {
      EntityPtr child = parse_file(opts, file_a, exit_code);
      if (!child) return exit_code;
      EntityPtr parent = parse_file(opts, file_b, exit_code);
      if (!parent) return exit_code;
      char* json = nullptr;
      char* err = nullptr;
      const qmc_status status =
          qmc_part_check(child.get(), parent.get(), opts.tol, &json, &err);
      CString text(json);
      CString error(err);
      return emit_json_result(opts, status, text, error);
    }

    if (coexist->parsed()) {
      if (commuting) {
        if (member_paths.size() != 2) {
          std::cerr << "--commuting expects exactly two observable files\n";
          return static_cast<int>(QMC_ERR_ARGUMENT);
        }
        EntityPtr a = parse_file(opts, member_paths[0], exit_code);
        if (!a) return exit_code;
        EntityPtr b = parse_file(opts, member_paths[1], exit_code);
        if (!b) return exit_code;
        char* json = nullptr;
        char* err = nullptr;
        const qmc_status status =
            qmc_coexist_commuting(a.get(), b.get(), opts.tol, &json, &err);
        CString text(json);
        CString error(err);
        return emit_json_result(opts, status, text, error);
      }
      if (parent_path.empty() || member_paths.empty()) {
        std::cerr << "coexist needs --parent plus member files, or --commuting\n";
        return static_cast<int>(QMC_ERR_ARGUMENT);
      }
      EntityPtr parent = parse_file(opts, parent_path, exit_code);
      if (!parent) return exit_code;
      std::vector<EntityPtr> members;
      std::vector<const qmc_entity*> raw;
      for (const auto& path : member_paths) {
        EntityPtr member = parse_file(opts, path, exit_code);
        if (!member) return exit_code;
        raw.push_back(member.get());
        members.push_back(std::move(member));
      }
      char* json = nullptr;
      char* err = nullptr;
      qmc_status status = QMC_OK;
      if (!state_path.empty() || !events_json.empty()) {
        if (state_path.empty() || events_json.empty()) {
          std::cerr << "joint probabilities need both --state and --events\n";
          return static_cast<int>(QMC_ERR_ARGUMENT);
        }
        EntityPtr state = parse_file(opts, state_path, exit_code);
        if (!state) return exit_code;
        status = qmc_joint_probability(parent.get(), raw.data(),
                                       static_cast<int>(raw.size()), state.get(),
                                       events_json.c_str(), opts.tol, &json, &err);
      } else {
        status = qmc_coexist(parent.get(), raw.data(), static_cast<int>(raw.size()), opts.tol,
                             &json, &err);
      }
      CString text(json);
      CString error(err);
      return emit_json_result(opts, status, text, error);
    }

    if (reduce->parsed()) {
      EntityPtr entity = parse_file(opts, file_a, exit_code);
      if (!entity) return exit_code;
      qmc_entity* result = nullptr;
      char* err = nullptr;
      const qmc_status status =
          qmc_reduce(entity.get(), dim_n1, dim_n2, side, opts.tol, &result, &err);
      CString error(err);
      return emit_entity_result(opts, status, result, error);
    }

    if (tensor_cmd->parsed()) {
      EntityPtr a = parse_file(opts, file_a, exit_code);
      if (!a) return exit_code;
      EntityPtr b = parse_file(opts, file_b, exit_code);
      if (!b) return exit_code;
      qmc_entity* result = nullptr;
      char* err = nullptr;
      const qmc_status status = qmc_tensor(a.get(), b.get(), opts.tol, &result, &err);
      CString error(err);
      return emit_entity_result(opts, status, result, error);
    }

    if (mm_run->parsed()) {
      EntityPtr entity = parse_file(opts, file_a, exit_code);
      if (!entity) return exit_code;
      char* json = nullptr;
      char* err = nullptr;
      const qmc_status status = qmc_mm_run(entity.get(), opts.tol, &json, &err);
      CString text(json);
      CString error(err);
      return emit_json_result(opts, status, text, error);
    }

    if (suite->parsed()) {
      char* json = nullptr;
      char* err = nullptr;
      int failed = 0;
      const qmc_status status =
          qmc_theorem_suite(opts.seed, opts.tol, opts.max_outcomes, timings ? 1 : 0, &json,
                            &failed, &err);
      CString text(json);
      CString error(err);
      if (status != QMC_OK) return report_failure(opts, status, error);
      write_output(opts, text.get());
      return failed == 0 ? 0 : 1;
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  }
  return 0;
}
