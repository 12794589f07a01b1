#pragma once

#include <filesystem>
#include <string>

#include "hoplite/hoplite.hpp"
#include "oracles.hpp"

namespace fixtures {

inline hoplite::ProjectBundle scenario(bool full = true) {
  return hoplite::loadProject(oracle::scenarioDir() / (full ? "scenario_1_full.project" : "scenario_1.project"));
}

inline hoplite::MssTemplate weekly(int weeks = 1, int theatres = 10) { return {weeks, 5, 2, 4.0, theatres}; }

inline std::filesystem::path tempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("hoplite_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace fixtures
