import datetime as dt
import json
import os
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, TypeVar

from tqdm import tqdm

from config import DEBUG_LOG_ENV, THREADS_ENV
from polyalg import FieldElem, P_ONE, P_ZERO, Poly, padd, pexquo, pgcd, pmul

T = TypeVar("T")
R = TypeVar("R")


def append_debug_log(payload: dict) -> None:
    """Append one NDJSON record to $HFK_DEBUG_LOG; never raise."""
    path = os.getenv(DEBUG_LOG_ENV)
    if not path:
        return
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        payload.setdefault("timestamp", int(dt.datetime.now().timestamp() * 1000))

        def _default(o):
            if isinstance(o, (set, frozenset, tuple)):
                return list(o)
            return str(o)

        with open(path, "a") as _f:
            _f.write(json.dumps(payload, default=_default) + "\n")
    except Exception as e:
        try:
            print(f"[debug-log-fail] {e}")
        except Exception:
            pass


def work_pool_size() -> int:
    raw = os.getenv(THREADS_ENV)
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def parallel_map(
    fn: Callable[[T], R],
    items: Sequence[T],
    threads: Optional[int] = None,
    progress: bool = False,
    desc: str = "",
) -> List[R]:
    """Order-preserving map over a thread pool bounded by $HFK_THREADS."""
    threads = threads or work_pool_size()
    if threads <= 1:
        it: Iterable[T] = tqdm(items, desc=desc, leave=False) if progress else items
        return [fn(x) for x in it]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(fn, items)
        if progress:
            results = tqdm(results, total=len(items), desc=desc, leave=False)
        return list(results)


def _row_to_polys(row: Dict[int, FieldElem], ncols: int) -> List[Poly]:
    den = P_ONE
    for c in row.values():
        if c.den != P_ONE:
            den = pexquo(pmul(den, c.den), pgcd(den, c.den))
    out = [P_ZERO] * ncols
    for j, c in row.items():
        out[j] = c.num if den == P_ONE else pexquo(pmul(c.num, den), c.den)
    return out


def fraction_free_rank(rows: Sequence[Dict[int, FieldElem]], ncols: int) -> int:
    """Rank over F2(t) of a sparse matrix given as {column: entry} rows.

    Rows are cleared of denominators, then eliminated fraction-free (Bareiss)
    over F2[t]; every division by the previous pivot is exact.
    """
    M = [_row_to_polys(r, ncols) for r in rows if any(r.values())]
    nrows = len(M)
    rank = 0
    prev = P_ONE
    for col in range(ncols):
        if rank == nrows:
            break
        candidates = [r for r in range(rank, nrows) if M[r][col]]
        if not candidates:
            continue
        piv = min(candidates, key=lambda r: len(M[r][col]))
        M[rank], M[piv] = M[piv], M[rank]
        p = M[rank][col]
        for r in range(rank + 1, nrows):
            a = M[r][col]
            for c in range(col + 1, ncols):
                val = padd(pmul(p, M[r][c]), pmul(a, M[rank][c]))
                M[r][c] = pexquo(val, prev) if val and prev != P_ONE else val
            M[r][col] = P_ZERO
        prev = p
        rank += 1
    return rank
