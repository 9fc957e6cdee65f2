#include <iostream>

#include "padicres/acceptance.hpp"

int main() { return padicres::acceptance::run_suite(std::cout); }
