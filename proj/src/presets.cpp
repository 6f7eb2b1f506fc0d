#include "oulab/config.hpp"

#include "presets.inc"

namespace oulab {

std::optional<std::string> preset_text(std::string_view name)
{
    if (name == "ex41") return std::string(generated::preset_ex41);
    if (name == "ex42") return std::string(generated::preset_ex42);
    if (name == "ex43") return std::string(generated::preset_ex43);
    return std::nullopt;
}

}  // namespace oulab
