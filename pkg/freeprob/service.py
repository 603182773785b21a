from fractions import Fraction
from typing import List, Optional

from fastapi import FastAPI, HTTPException
from fastapi.responses import Response
from prometheus_client import CONTENT_TYPE_LATEST, Counter, Histogram, generate_latest
from pydantic import BaseModel, Field
import structlog

from . import __version__, exactcount
from .cumulants import CumulantSequence, MomentSequence, cumulants_from_moments, moments_from_cumulants
from .errors import FreeProbError, UsageError
from .laws import LawSpec, law_moment
from .partitions import as_word
from .weingarten import EasyGroup, integrate_monomial, integrate_word, weingarten

logger = structlog.get_logger(__name__)

# Metrics
MET_REQUESTS = Counter("freeprob_requests_total", "API requests", ["endpoint"])
MET_ERRORS = Counter("freeprob_computation_errors_total", "Failed computations", ["kind"])
MET_TABLE_SIZE = Histogram("freeprob_weingarten_table_size", "Size of the partition basis of served Weingarten tables",
                           buckets=(1, 2, 5, 15, 52, 203, 877, 4140))

app = FastAPI(title="freeprob", version=__version__)


def _fail(e: FreeProbError) -> HTTPException:
    MET_ERRORS.labels(kind=type(e).__name__).inc()
    logger.info("request_failed", error=type(e).__name__, message=str(e))
    status = 400 if isinstance(e, UsageError) else 422
    return HTTPException(status_code=status, detail={"error": type(e).__name__, "message": str(e)})


def _fractions(values) -> List[str]:
    return [exactcount.fraction_str(v) for v in values]


def _parse(values: List[str]) -> List[Fraction]:
    try:
        return [Fraction(v) for v in values]
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a list of rationals: {values}")


class CumulantsRequest(BaseModel):
    flavor: str = "classical"
    moments: Optional[List[str]] = None
    cumulants: Optional[List[str]] = None


class WeingartenRequest(BaseModel):
    group: str = "O"
    free: bool = False
    s: Optional[str] = None
    k: Optional[int] = None
    colors: Optional[str] = None
    N: int = Field(..., ge=1)


class IntegrateRequest(BaseModel):
    group: str = "O"
    free: bool = False
    s: Optional[str] = None
    N: int = Field(..., ge=1)
    pattern: Optional[str] = None
    rows: Optional[List[int]] = None
    cols: Optional[List[int]] = None
    colors: Optional[str] = None


class LawMomentsRequest(BaseModel):
    family: str
    t: str = "1"
    s: Optional[str] = None
    c: str = "0"
    N: Optional[int] = None
    reading: str = "compound"
    order: int = Field(6, ge=1)
    colors: Optional[str] = None


@app.get("/health")
async def health():
    return {"status": "ok", "version": __version__}


@app.get("/api/numbers/{name}")
async def numbers(name: str, k: int = 8, s: str = "1", t: str = "1", N: Optional[int] = None):
    MET_REQUESTS.labels(endpoint="numbers").inc()
    try:
        if name == "catalan":
            return {"name": name, "values": _fractions(exactcount.catalan(j) for j in range(k + 1))}
        if name == "bell":
            return {"name": name, "values": _fractions(exactcount.bell(j) for j in range(k + 1))}
        if name == "stirling2":
            return {"name": name, "values": _fractions(exactcount.stirling2(k, b) for b in range(k + 1))}
        if name == "poker":
            probs = exactcount.poker_probabilities()
            return {"name": name, "probabilities": {h: exactcount.fraction_str(p) for h, p in probs.items()}}
        s_val, t_val = _parse([s, t])
        if name == "fuss_catalan":
            return {"name": name, "value": exactcount.fraction_str(exactcount.fuss_catalan(s_val, k))}
        if name == "fuss_narayana":
            return {"name": name, "value": exactcount.fraction_str(exactcount.fuss_narayana(s_val, k, t_val))}
        if name == "derangement":
            size = N if N is not None else k
            return {"name": name, "values": _fractions(exactcount.derangement_profile(size, r) for r in range(size + 1))}
    except FreeProbError as e:
        raise _fail(e)
    except ValueError as e:
        raise _fail(UsageError(str(e)))
    raise HTTPException(status_code=404, detail=f"unknown number family {name!r}")


@app.post("/api/cumulants")
async def cumulants(req: CumulantsRequest):
    MET_REQUESTS.labels(endpoint="cumulants").inc()
    try:
        if req.moments is not None:
            c = cumulants_from_moments(MomentSequence(_parse(req.moments)), req.flavor)
            return {"flavor": c.flavor, "cumulants": _fractions(c.values)}
        if req.cumulants is not None:
            m = moments_from_cumulants(CumulantSequence(_parse(req.cumulants), req.flavor))
            return {"flavor": req.flavor, "moments": _fractions(m.values)}
        raise UsageError("give moments or cumulants")
    except FreeProbError as e:
        raise _fail(e)


@app.post("/api/weingarten")
async def weingarten_table(req: WeingartenRequest):
    MET_REQUESTS.labels(endpoint="weingarten").inc()
    try:
        group = EasyGroup.parse(req.group, free=req.free, s=req.s)
        if req.colors is None and req.k is None:
            raise UsageError("give k or colors")
        table = weingarten(group, as_word(req.colors) if req.colors else req.k, req.N)
    except FreeProbError as e:
        raise _fail(e)
    MET_TABLE_SIZE.observe(table.size)
    return table.to_json()


@app.post("/api/integrate")
async def integrate(req: IntegrateRequest):
    MET_REQUESTS.labels(endpoint="integrate").inc()
    try:
        group = EasyGroup.parse(req.group, free=req.free, s=req.s)
        if req.pattern:
            value = integrate_word(group, req.N, req.pattern)
        elif req.rows is not None and req.cols is not None:
            value = integrate_monomial(group, req.N, req.rows, req.cols, req.colors)
        else:
            raise UsageError("give a pattern or rows and cols")
    except FreeProbError as e:
        raise _fail(e)
    return {"group": str(group), "N": req.N, "value": exactcount.fraction_str(value)}


@app.post("/api/law/moments")
async def law_moments(req: LawMomentsRequest):
    MET_REQUESTS.labels(endpoint="law_moments").inc()
    try:
        t, c = _parse([req.t, req.c])
        s = req.s if req.s is not None else 1
        if req.family == "FreeBessel" and req.reading == "multiplicative":
            s = _parse([str(s)])[0]
        law = LawSpec(req.family, t=t, s=s, c=c, N=req.N, reading=req.reading)
        if req.colors:
            value = law_moment(law, as_word(req.colors))
            return {"law": law.describe(), "word": req.colors, "moment": _encode(value)}
        if law.is_colored:
            raise UsageError(f"{law.family} is a planar law: give colors")
        return {"law": law.describe(), "moments": [_encode(law_moment(law, k)) for k in range(1, req.order + 1)]}
    except FreeProbError as e:
        raise _fail(e)


def _encode(value):
    if isinstance(value, float):
        return value
    return exactcount.fraction_str(value)


@app.get("/metrics")
async def metrics():
    """Expose Prometheus metrics."""
    return Response(generate_latest(), media_type=CONTENT_TYPE_LATEST)
