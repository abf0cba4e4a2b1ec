#include "iconcode/cli.hpp"

int main(int argc, char** argv) { return iconcode::run_command(argc, argv); }
