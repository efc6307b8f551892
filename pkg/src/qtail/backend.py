"""Backend selection: compiled extension if present, pure Python otherwise.

Set ``QTAIL_BACKEND=python`` to force the fallback (used by the benchmark
and by tests that compare the two implementations).
"""

import os

if os.environ.get("QTAIL_BACKEND", "").lower() == "python":
    from . import _corepy as _impl

    BACKEND = "python"
else:
    try:
        from . import _corec as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _corepy as _impl

        BACKEND = "python"

qpoch_raw = _impl.qpoch_raw
logqpoch_raw = _impl.logqpoch_raw
theta_logderiv_raw = _impl.theta_logderiv_raw
phi21_raw = _impl.phi21_raw
theta3_raw = _impl.theta3_raw


def backend_name() -> str:
    return BACKEND
