#pragma once

#include <stdexcept>
#include <string>

namespace decoupling {

// Invalid problem data (bad sign vector, point outside the diagram, p < 2, ...).
class invalid_spec_error : public std::invalid_argument {
public:
    explicit invalid_spec_error(const std::string& what) : std::invalid_argument(what) {}
};

// A computation was asked to exceed its configured node/work budget.
class resource_error : public std::runtime_error {
public:
    explicit resource_error(const std::string& what) : std::runtime_error(what) {}
};

// A numerical configuration cannot meet its stated accuracy target
// (truncation tail too fat, table resolution too coarse, ...).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace decoupling
