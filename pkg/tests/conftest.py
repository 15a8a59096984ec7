from __future__ import annotations

import pytest

# The running example used throughout: a small arithmetic program whose
# compressed graph lands near 10 nodes / 15 edges.
EXAMPLE_PROGRAM = """\
int main(void) {
    int a = 2;
    int b = a * a;
    if (b > a) {
        b = b - a;
    }
    printf("a + b = %d", a + b);
    return 0;
}
"""


@pytest.fixture
def example_source() -> str:
    return EXAMPLE_PROGRAM


@pytest.fixture
def example_project(tmp_path):
    src = tmp_path / "proj"
    src.mkdir()
    (src / "main.c").write_text(EXAMPLE_PROGRAM)
    return src
