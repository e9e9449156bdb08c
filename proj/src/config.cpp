// SPDX-License-Identifier: Apache-2.0
#include "tpca/config.hpp"

#include <string>

#include "tpca/errors.hpp"

namespace tpca {

Config& config() {
    static Config instance;
    return instance;
}

void check_allocation(std::uint64_t bytes, const char* what) {
    const std::uint64_t cap = config().memory_cap;
    if (bytes > cap) {
        throw CapacityError(std::string(what) + " needs " + std::to_string(bytes)
                            + " bytes, exceeding the configured cap of "
                            + std::to_string(cap) + " bytes");
    }
}

} // namespace tpca
