#include <iostream>

#include "qfn/acceptance.hpp"

int main() {
    const bool ok = qfn::accept::run_all(std::cout);
    return ok ? 0 : 1;
}
