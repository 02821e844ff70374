#pragma once

namespace mdi {

int run_cli(int argc, const char* const* argv);

} // namespace mdi
