#pragma once

#include <stdexcept>
#include <string>

namespace storynet {

/// Bad arguments or configuration.
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or missing input data.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A numerical step (fit, solve) could not produce a result.
class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Power-law fit failure tied to one region of the feature extractor.
class fit_error : public numerical_error {
public:
    fit_error(std::string region, const std::string& what)
        : numerical_error(region + ": " + what), region_(std::move(region)) {}

    const std::string& region() const noexcept { return region_; }

private:
    std::string region_;
};

} // namespace storynet
