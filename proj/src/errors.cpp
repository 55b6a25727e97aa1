#include "pumpsep/errors.hpp"

namespace pumpsep {

int exit_code_for(const std::exception& e) noexcept
{
    if (dynamic_cast<const ModelError*>(&e) != nullptr) return 3;
    if (dynamic_cast<const Error*>(&e) != nullptr) return 2;
    return 1;
}

} // namespace pumpsep
