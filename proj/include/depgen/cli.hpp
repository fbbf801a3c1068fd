#pragma once

namespace depgen {

int run_cli(int argc, char** argv);

}  // namespace depgen
