#include "rgshock/cli.hpp"

int main(int argc, char** argv) { return rgs::run_cli(argc, argv); }
