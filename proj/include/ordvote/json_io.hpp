#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ordvote/error.hpp"
#include "ordvote/matrix.hpp"
#include "ordvote/profile.hpp"

namespace ordvote {

struct MatrixFile {
  MarginMatrix matrix;
  std::vector<std::string> labels;  // optional, display only
};

// Matrix file: {"n": int, "weights": [[int,...],...], "labels"?: [str,...]}.
// Loading validates the invariants and re-derives canonical weights so that
// files produced anywhere compare bit-exactly after a round trip.
inline MatrixFile parse_matrix_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("weights"))
    fail(Errc::bad_input, "matrix JSON needs \"n\" and \"weights\"");
  int n = j.at("n").get<int>();
  auto weights = j.at("weights").get<std::vector<std::vector<int>>>();
  MatrixFile f;
  f.matrix = MarginMatrix::from_weights(n, std::move(weights)).normalized();
  if (j.contains("labels")) {
    f.labels = j.at("labels").get<std::vector<std::string>>();
    if ((int)f.labels.size() != n) fail(Errc::bad_input, "labels length must equal n");
  }
  return f;
}

inline nlohmann::json matrix_to_json(const MarginMatrix& m,
                                     const std::vector<std::string>& labels = {}) {
  nlohmann::json j;
  j["n"] = m.size();
  j["weights"] = m.weights();
  if (!labels.empty()) j["labels"] = labels;
  return j;
}

inline nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::bad_input, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::bad_input, path + ": " + e.what());
  }
  return j;
}

inline MatrixFile load_matrix(const std::string& path) {
  try {
    return parse_matrix_json(load_json_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::bad_input, path + ": " + e.what());
  }
}

inline void save_json_file(const std::string& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) fail(Errc::bad_input, "cannot write " + path);
  out << j.dump(1) << "\n";
}

// Profile file: {"n": int, "ballots": [[int,...],...]}.
inline Profile parse_profile_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("ballots"))
    fail(Errc::bad_input, "profile JSON needs \"n\" and \"ballots\"");
  try {
    return Profile::make(j.at("n").get<int>(),
                         j.at("ballots").get<std::vector<std::vector<Alt>>>());
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::bad_input, e.what());
  }
}

inline Profile load_profile(const std::string& path) {
  return parse_profile_json(load_json_file(path));
}

inline nlohmann::json profile_to_json(const Profile& p) {
  nlohmann::json j;
  j["n"] = p.n;
  j["ballots"] = p.ballots;
  return j;
}

}  // namespace ordvote
