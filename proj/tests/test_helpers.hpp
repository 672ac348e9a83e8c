#ifndef HYBRIDLOC_TESTS_TEST_HELPERS_HPP_
#define HYBRIDLOC_TESTS_TEST_HELPERS_HPP_

#include <cmath>
#include <filesystem>
#include <string>

#include <doctest.h>

#include "hybridloc/errors.hpp"

// Absolute-difference check; doctest's Approx is relative, which is the wrong
// tool for values near zero.
#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

// Asserts that expr throws hybridloc::Error with the given code. The code is
// API surface (the CLI prints it), so tests pin it alongside the type.
#define CHECK_THROWS_CODE(expr, expected_code)                          \
  do {                                                                  \
    bool caught = false;                                                \
    try {                                                               \
      (void)(expr);                                                     \
    } catch (const hybridloc::Error& e) {                               \
      caught = true;                                                    \
      CHECK_MESSAGE(e.code() == (expected_code),                        \
                    "threw [" << e.code_name() << "] " << e.what());    \
    }                                                                   \
    CHECK_MESSAGE(caught, #expr " did not throw");                      \
  } while (0)

namespace testutil {

/// Scratch directory for files the tests write; cleared once per process.
inline std::string test_path(const std::string& name) {
  static const std::string dir = [] {
    const auto d = std::filesystem::temp_directory_path() / "hybridloc_unit_tests";
    std::filesystem::remove_all(d);
    std::filesystem::create_directories(d);
    return d.string();
  }();
  return dir + "/" + name;
}

inline std::string data_path(const std::string& name) {
  return std::string(HYBRIDLOC_DATA_DIR "/") + name;
}

}  // namespace testutil

#endif  // HYBRIDLOC_TESTS_TEST_HELPERS_HPP_
