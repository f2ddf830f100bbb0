#pragma once

#include <stdexcept>

namespace hanet {

// Error categories; the CLI maps config/data errors to exit 2 and numeric
// failures to exit 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct DataError : Error { using Error::Error; };
struct NumericError : Error { using Error::Error; };
struct IndexError : Error { using Error::Error; };
struct StateError : Error { using Error::Error; };

}  // namespace hanet
