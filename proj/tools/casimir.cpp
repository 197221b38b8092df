#include "casimir/app.hpp"

int main(int argc, char** argv) { return casimir::run_cli(argc, argv); }
