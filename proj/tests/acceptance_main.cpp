#include <iostream>

#include "symplopt/acceptance.hpp"

int main() { return symplopt::acceptance::run_all(std::cout); }
