import io
import json

import pytest

from kappa_lp.trace import Trace


def test_events_stream_in_order():
    ticks = iter(range(100))
    buf = io.StringIO()
    tr = Trace(buf, clock=lambda: float(next(ticks)))
    tr.emit("Outer", 0)
    tr.emit("FGM", 1, tau=-0.5, f_value=1e-3, steps=40)
    tr.emit("Cert", 0, f_value=2e-9, steps=7)
    rows = [json.loads(line) for line in buf.getvalue().splitlines()]
    assert [r["phase"] for r in rows] == ["Outer", "FGM", "Cert"]
    assert [r["timestamp"] for r in rows] == [0.0, 1.0, 2.0]
    assert rows[1] == {"phase": "FGM", "depth": 1, "tau": -0.5, "f_value": 1e-3, "steps": 40, "timestamp": 1.0}
    assert tr.total_steps() == 47


def test_unknown_phase():
    with pytest.raises(ValueError):
        Trace().emit("Simplex", 0)
