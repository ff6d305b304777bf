#pragma once

#include <stdexcept>
#include <string>

namespace spqcnn {

// Error taxonomy used across the library. All carry a human-readable message
// naming the offending value.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct ContainmentError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct CapacityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace spqcnn
