#include "mrfuzzy/cli.hpp"

int main(int argc, char** argv) { return mrfuzzy::run_cli(argc, argv); }
