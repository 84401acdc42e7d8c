import doctest

import pytest

import diffractkit.averaging
import diffractkit.spectrum


@pytest.mark.parametrize("module", [diffractkit.averaging, diffractkit.spectrum],
                         ids=lambda m: m.__name__)
def test_docstring_examples(module):
    result = doctest.testmod(module, optionflags=doctest.NORMALIZE_WHITESPACE)
    assert result.attempted > 0 and result.failed == 0
