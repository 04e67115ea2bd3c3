#pragma once

#include <string>
#include <vector>

namespace multavg::lab {

inline constexpr int kCatalogVersion = 1;

/// A runnable configuration reproducing one acceptance check.
struct Recipe {
    int criterion = 0;
    std::string id;
    std::string title;
    std::string config;
};

struct ExampleSystem {
    std::string id;
    std::string description;
    std::vector<std::string> forms;
};

const std::vector<Recipe>& recipes();
const std::vector<ExampleSystem>& example_systems();

/// Versioned catalog text: builtin functions, example form systems and
/// recipes with their configurations.
std::string list_fixtures();

} // namespace multavg::lab
