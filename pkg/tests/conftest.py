import pytest

from synsetkit import _pure, cluster, embed, expand, watset

try:
    from synsetkit import _kernels
except ImportError:
    _kernels = None

BACKENDS = {"pure": _pure}
if _kernels is not None:
    BACKENDS["compiled"] = _kernels

_USERS = (cluster, embed, expand, watset)


@pytest.fixture(params=sorted(BACKENDS))
def backend(request, monkeypatch):
    """Run the test once per available kernel backend."""
    mod = BACKENDS[request.param]
    for user in _USERS:
        monkeypatch.setattr(user, "kernels", mod)
    return request.param
