#pragma once

#include <stdexcept>
#include <string>

namespace cryoswitch {

// Base for everything the library throws on purpose.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct domain_error : error { using error::error; };
struct validation_error : error { using error::error; };
struct singularity_error : error { using error::error; };
struct stability_error : error { using error::error; };
struct calibration_error : error { using error::error; };
struct optimization_error : error { using error::error; };
struct integrity_error : error { using error::error; };
struct config_error : error { using error::error; };

}  // namespace cryoswitch
