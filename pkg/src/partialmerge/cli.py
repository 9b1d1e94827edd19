"""Command-line client for the merge service.

Each subcommand reads and writes local files but delegates the actual
computation to the HTTP API: either a remote server (``--server-url``) or
an in-process instance of the same app. File-format problems are reported
with line numbers before anything is sent.
"""

from __future__ import annotations

import asyncio
import csv
import json
from pathlib import Path
from typing import Any, Optional

import click
import httpx

from .logio import LogFormatError, LogValidationError, UtteranceLog, read_log, write_log
from .service.schemas import UtteranceModel
from .simgen import synth_references

DEFAULT_TIMEOUT = 600.0


def call_service(
    server_url: str | None, method: str, path: str, payload: dict[str, Any]
) -> httpx.Response:
    if server_url is not None:
        with httpx.Client(base_url=server_url, timeout=DEFAULT_TIMEOUT) as client:
            return client.request(method, path, json=payload)

    from .service.app import create_app

    async def _call() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://partialmerge.local"
        ) as client:
            return await client.request(method, path, json=payload)

    return asyncio.run(_call())


def request_or_fail(
    server_url: str | None, method: str, path: str, payload: dict[str, Any]
) -> dict[str, Any]:
    try:
        response = call_service(server_url, method, path, payload)
    except httpx.HTTPError as exc:
        raise click.ClickException(f"service unreachable: {exc}") from exc
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise click.ClickException(f"service error ({response.status_code}): {detail}")
    return response.json()


def load_log_file(path: str) -> list[UtteranceLog]:
    try:
        return read_log(path)
    except FileNotFoundError as exc:
        raise click.ClickException(str(exc)) from exc
    except (LogFormatError, LogValidationError) as exc:
        raise click.ClickException(f"{path}: {exc}") from exc


def logs_to_wire(logs: list[UtteranceLog]) -> list[dict[str, Any]]:
    return [UtteranceModel.from_domain(log).model_dump() for log in logs]


def wire_to_logs(items: list[dict[str, Any]]) -> list[UtteranceLog]:
    return [UtteranceModel(**item).to_domain() for item in items]


class OptionalLimit(click.ParamType):
    """Numeric flag value that also accepts "inf" for a disabled limit."""

    def __init__(self, name: str, integer: bool):
        self.name = name
        self.integer = integer

    def convert(self, value, param, ctx):  # type: ignore[override]
        if value is None or isinstance(value, (int, float)):
            return value
        text = str(value).strip().lower()
        if text in ("inf", "infinity", "none", "unlimited"):
            return None
        try:
            return int(text) if self.integer else float(text)
        except ValueError:
            self.fail(f"{value!r} is not a number or 'inf'", param, ctx)


WINDOW = OptionalLimit("window", integer=True)
THRESHOLD = OptionalLimit("threshold", integer=False)


def params_payload(
    trim_t: int,
    window_m: Optional[int],
    recent_k: int,
    rho_r: Optional[float],
    rho_f: Optional[float],
) -> dict[str, Any]:
    return {
        "trim_t": trim_t,
        "window_m": window_m,
        "recent_k": recent_k,
        "rho_r": rho_r,
        "rho_f": rho_f,
    }


def merge_param_options(command):
    options = [
        click.option("--trim-t", type=click.IntRange(min=0), default=1, show_default=True,
                     help="Tokens trimmed from the end of each cascaded partial."),
        click.option("--window-m", type=WINDOW, default=25, show_default=True,
                     help="Alignment window size, or 'inf' for full alignment."),
        click.option("--recent-k", type=click.IntRange(min=0), default=10, show_default=True,
                     help="Tokens in the recent-cost window."),
        click.option("--rho-r", type=THRESHOLD, default=0.5, show_default=True,
                     help="Recent-cost acceptance threshold, or 'inf' to disable."),
        click.option("--rho-f", type=THRESHOLD, default=None,
                     help="Full-cost acceptance threshold, or 'inf' to disable. [default: inf]"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


@click.group()
@click.option("--server-url", default=None, envvar="PARTIALMERGE_SERVER",
              help="Base URL of a running service; defaults to an in-process instance.")
@click.pass_context
def main(ctx: click.Context, server_url: str | None) -> None:
    """Merge, score, simulate, and sweep two-stream partial-result logs."""
    ctx.obj = server_url


@main.command()
@click.argument("in_log", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Merged log path.")
@merge_param_options
@click.pass_obj
def merge(server_url, in_log, out, trim_t, window_m, recent_k, rho_r, rho_f) -> None:
    """Rewrite the causal partials of a two-stream log into composites."""
    logs = load_log_file(in_log)
    payload = {
        "utterances": logs_to_wire(logs),
        "params": params_payload(trim_t, window_m, recent_k, rho_r, rho_f),
    }
    result = request_or_fail(server_url, "POST", "/v1/merge", payload)
    write_log(wire_to_logs(result["utterances"]), out)
    for stats in result["stats"]:
        click.echo(
            "{utterance_id}: causal={causal_partials} cascaded={cascaded_partials} "
            "accepted={accepted} rejected={rejected} fallback={fallback_rewrites} "
            "passthrough={passthroughs}".format(**stats)
        )
    timing = result["timing"]
    if timing["rewrites"]:
        click.echo(
            f"rewrites: {timing['rewrites']}  "
            f"mean {timing['mean_ms']:.4f} ms  "
            f"p99 {timing['p99_ms']:.4f} ms  "
            f"max {timing['max_ms']:.4f} ms"
        )
    click.echo(f"wrote {out}")


def _record_lines(result: dict[str, Any]) -> list[str]:
    lines = []
    for record in result["per_utterance"]:
        lines.append(json.dumps({"record": "utterance", **record}, ensure_ascii=False))
    corpus = {k: v for k, v in result["corpus"].items() if k != "utterance_id"}
    lines.append(json.dumps({"record": "corpus", **corpus}, ensure_ascii=False))
    if result.get("baseline_corpus"):
        base = {k: v for k, v in result["baseline_corpus"].items() if k != "utterance_id"}
        lines.append(json.dumps({"record": "baseline_corpus", **base}, ensure_ascii=False))
    if result.get("delta"):
        lines.append(json.dumps({"record": "delta", **result["delta"]}, ensure_ascii=False))
    return lines


@main.command()
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("--baseline", type=click.Path(exists=True, dir_okay=False),
              help="Log to diff against (typically the unmerged input).")
@click.option("--stream", type=click.Choice(["causal", "cascaded"]), default="causal",
              show_default=True, help="Which origin's partials form the displayed stream.")
@click.option("--out", type=click.Path(dir_okay=False),
              help="Write the JSONL report here instead of stdout.")
@click.pass_obj
def metrics(server_url, log, baseline, stream, out) -> None:
    """Score a log's partial stream: PWER, partial latency, UPWR, final WER."""
    payload: dict[str, Any] = {
        "utterances": logs_to_wire(load_log_file(log)),
        "stream": stream.upper(),
    }
    if baseline:
        payload["baseline"] = logs_to_wire(load_log_file(baseline))
    result = request_or_fail(server_url, "POST", "/v1/metrics", payload)

    lines = _record_lines(result)
    if out:
        Path(out).write_text("\n".join(lines) + "\n", encoding="utf-8")
        corpus = result["corpus"]
        click.echo(
            f"corpus: pwer={corpus['pwer']:.4f} upwr_partials={corpus['upwr_partials']:.4f} "
            f"upwr_transition={corpus['upwr_transition']:.4f} upwr_all={corpus['upwr_all']:.4f} "
            f"final_wer={corpus['final_wer']:.4f}"
        )
        click.echo(f"wrote {out}")
    else:
        for line in lines:
            click.echo(line)

    delta = result.get("delta")
    if delta and not delta["finals_match"]:
        raise click.ClickException("FINAL results differ from the baseline log")


@main.command()
@click.argument("references", required=False, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Output log path.")
@click.option("--synthetic", type=click.IntRange(min=1), default=None,
              help="Generate this many synthetic reference transcripts instead of reading a file.")
@click.option("--interval-ms", type=click.IntRange(min=1), default=300, show_default=True)
@click.option("--jitter-ms", type=click.IntRange(min=0), default=0, show_default=True)
@click.option("--delay-ms", type=click.IntRange(min=0), default=900, show_default=True)
@click.option("--causal-error-rate", type=click.FloatRange(0, 1), default=0.08, show_default=True)
@click.option("--cascaded-error-rate", type=click.FloatRange(0, 1), default=0.02, show_default=True)
@click.option("--error-mix", default="0.8,0.1,0.1", show_default=True,
              help="Comma-separated substitute,delete,insert weights.")
@click.option("--no-monotone", is_flag=True, help="Allow each stream to flicker on its own.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_obj
def simulate(server_url, references, out, synthetic, interval_ms, jitter_ms, delay_ms,
             causal_error_rate, cascaded_error_rate, error_mix, no_monotone, seed) -> None:
    """Generate a paired causal/cascaded event log from reference transcripts.

    REFERENCES is a text file with one utterance per line, either
    "utterance-id<TAB>words..." or just "words...".
    """
    try:
        mix = tuple(float(p) for p in error_mix.split(","))
    except ValueError:
        raise click.UsageError(f"--error-mix {error_mix!r} is not a comma-separated triple")
    if len(mix) != 3:
        raise click.UsageError("--error-mix needs exactly three weights")

    refs: list[dict[str, str]] = []
    if synthetic is not None:
        for utt_id, words in synth_references(synthetic, seed=seed):
            refs.append({"utterance_id": utt_id, "text": " ".join(words)})
    elif references is None:
        raise click.UsageError("provide a REFERENCES file or --synthetic N")
    else:
        for i, raw in enumerate(Path(references).read_text(encoding="utf-8").splitlines()):
            line = raw.strip()
            if not line:
                continue
            if "\t" in line:
                utt_id, text = line.split("\t", 1)
            else:
                utt_id, text = f"utt-{i:04d}", line
            refs.append({"utterance_id": utt_id.strip(), "text": text.strip()})
        if not refs:
            raise click.ClickException(f"{references}: no reference transcripts found")

    payload = {
        "references": refs,
        "config": {
            "causal_word_interval_ms": interval_ms,
            "causal_jitter_ms": jitter_ms,
            "cascaded_delay_ms": delay_ms,
            "causal_error_rate": causal_error_rate,
            "cascaded_error_rate": cascaded_error_rate,
            "error_mix": mix,
            "monotone": not no_monotone,
            "seed": seed,
        },
    }
    result = request_or_fail(server_url, "POST", "/v1/simulate", payload)
    write_log(wire_to_logs(result["utterances"]), out)
    click.echo(f"wrote {len(result['utterances'])} utterances to {out}")


SWEEP_CSV_COLUMNS = (
    "param_value",
    "pwer",
    "upwr_partials",
    "upwr_transition",
    "upwr_all",
    "delta_pl_ms",
    "final_wer",
)


@main.command()
@click.argument("log", type=click.Path(exists=True, dir_okay=False))
@click.option("--param", "parameter", required=True, type=click.Choice(["T", "rho_r", "K", "M"]),
              help="Which knob to sweep; all others stay at their defaults.")
@click.option("--values", required=True,
              help="Comma-separated values; 'inf' allowed for rho_r and M.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Output CSV path.")
@merge_param_options
@click.pass_obj
def sweep(server_url, log, parameter, values, out,
          trim_t, window_m, recent_k, rho_r, rho_f) -> None:
    """Merge+score the corpus once per value and write one CSV row per value."""
    parsed: list[float | None] = []
    for chunk in values.split(","):
        text = chunk.strip().lower()
        if not text:
            continue
        if text in ("inf", "infinity"):
            parsed.append(None)
        else:
            try:
                parsed.append(float(text))
            except ValueError:
                raise click.UsageError(f"--values entry {chunk!r} is not a number or 'inf'")
    if not parsed:
        raise click.UsageError("--values is empty")

    payload = {
        "utterances": logs_to_wire(load_log_file(log)),
        "parameter": parameter,
        "values": parsed,
        "params": params_payload(trim_t, window_m, recent_k, rho_r, rho_f),
    }
    result = request_or_fail(server_url, "POST", "/v1/sweep", payload)
    with open(out, "w", encoding="utf-8", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=SWEEP_CSV_COLUMNS)
        writer.writeheader()
        for row in result["rows"]:
            value = dict(row)
            if value["delta_pl_ms"] is None:
                value["delta_pl_ms"] = ""
            writer.writerow({k: value[k] for k in SWEEP_CSV_COLUMNS})
    click.echo(f"wrote {len(result['rows'])} rows to {out}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("partialmerge.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
