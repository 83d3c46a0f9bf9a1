from lexfst.apply import available_kernels


def pytest_generate_tests(metafunc):
    # plain parametrization (not a fixture) so hypothesis tests can take it too
    if "kernel" in metafunc.fixturenames:
        kernels = available_kernels()
        metafunc.parametrize("kernel", kernels, ids=[k.BACKEND for k in kernels])
