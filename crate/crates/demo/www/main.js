import init, { siso_pairing, gain_curves, performance_curves } from "./pkg/risnd_demo.js";

const COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];
const $ = (id) => document.getElementById(id);

function numbers(text) {
  return text.split(",").map((s) => Number(s.trim())).filter((x) => !Number.isNaN(x));
}

function showError(el, e) {
  el.innerHTML = "";
  const p = document.createElement("p");
  p.className = "err";
  p.textContent = String(e.message ?? e);
  el.appendChild(p);
}

// Minimal SVG line chart; `log` plots log10(y) and drops non-positive values.
function plot(el, series, { xlabel, ylabel, log = false }) {
  const W = 820, H = 320, L = 60, R = 10, T = 10, B = 40;
  const pts = series.map((s) =>
    s.x.map((x, i) => [x, log ? Math.log10(s.y[i]) : s.y[i]]).filter(([, y]) => Number.isFinite(y)));
  const all = pts.flat();
  if (all.length === 0) return showError(el, "nothing to plot");
  const [x0, x1] = [Math.min(...all.map((p) => p[0])), Math.max(...all.map((p) => p[0]))];
  let [y0, y1] = [Math.min(...all.map((p) => p[1])), Math.max(...all.map((p) => p[1]))];
  if (y0 === y1) { y0 -= 1; y1 += 1; }
  const sx = (x) => L + ((x - x0) / (x1 - x0 || 1)) * (W - L - R);
  const sy = (y) => H - B - ((y - y0) / (y1 - y0)) * (H - T - B);
  let svg = `<svg width="${W}" height="${H}" xmlns="http://www.w3.org/2000/svg">`;
  svg += `<line x1="${L}" y1="${H - B}" x2="${W - R}" y2="${H - B}" stroke="#888"/>`;
  svg += `<line x1="${L}" y1="${T}" x2="${L}" y2="${H - B}" stroke="#888"/>`;
  for (let k = 0; k <= 4; k++) {
    const y = y0 + ((y1 - y0) * k) / 4, x = x0 + ((x1 - x0) * k) / 4;
    const yl = log ? `1e${y.toFixed(1)}` : y.toPrecision(3);
    svg += `<text x="${L - 4}" y="${sy(y) + 4}" font-size="11" text-anchor="end">${yl}</text>`;
    svg += `<text x="${sx(x)}" y="${H - B + 16}" font-size="11" text-anchor="middle">${+x.toPrecision(4)}</text>`;
  }
  svg += `<text x="${(L + W) / 2}" y="${H - 4}" font-size="12" text-anchor="middle">${xlabel}</text>`;
  svg += `<text x="12" y="${(T + H - B) / 2}" font-size="12" transform="rotate(-90 12 ${(T + H - B) / 2})" text-anchor="middle">${ylabel}</text>`;
  pts.forEach((p, i) => {
    const c = COLORS[i % COLORS.length];
    const dash = series[i].stderr.length ? "" : ' stroke-dasharray="5 3"';
    svg += `<polyline fill="none" stroke="${c}" stroke-width="1.8"${dash} points="${p.map(([x, y]) => `${sx(x)},${sy(y)}`).join(" ")}"/>`;
    for (const [x, y] of p) svg += `<circle cx="${sx(x)}" cy="${sy(y)}" r="2.5" fill="${c}"/>`;
  });
  svg += "</svg>";
  const legend = series.map((s, i) => `<span style="color:${COLORS[i % COLORS.length]}">■ ${s.name}</span>`).join("");
  el.innerHTML = svg + `<div class="legend">${legend}</div>`;
}

function runPairing() {
  try {
    const r = JSON.parse(siso_pairing(new Float64Array(numbers($("pa").value)), new Float64Array(numbers($("pb").value))));
    const map = r.map.map((to, i) => `${i + 1}→${to}`).join(", ");
    $("pout").textContent = `diagonal Σ aᵢbᵢ = ${r.diagonal_sum.toFixed(4)}\nsorted   Σ a₍ᵢ₎b₍ᵢ₎ = ${r.sorted_sum.toFixed(4)}\nelement map: ${map}`;
  } catch (e) {
    showError($("pout"), e);
  }
}

function runGains() {
  try {
    const ns = new Uint32Array([4, 8, 16, 32, 64, 128, 256]);
    const s = JSON.parse(gain_curves(ns, Number($("gk").value), Number($("gt").value), 1n));
    plot($("gplot"), s, { xlabel: "N", ylabel: "normalized gain" });
  } catch (e) {
    showError($("gplot"), e);
  }
}

function runErrors() {
  try {
    const out = JSON.parse(performance_curves("outage", new Uint32Array([8, 12, 16, 20, 24, 32, 40, 48, 64]),
      new Float64Array([Number($("orho").value)]), Number($("oth").value)));
    plot($("oplot"), out, { xlabel: "N", ylabel: "outage probability", log: true });
    const rho = new Float64Array(Array.from({ length: 20 }, (_, i) => -10 + 2 * i));
    const ber = JSON.parse(performance_curves("ber", new Uint32Array([Number($("bn").value)]), rho, 0));
    plot($("bplot"), ber, { xlabel: "ρ [dB]", ylabel: "average BER", log: true });
  } catch (e) {
    showError($("oplot"), e);
  }
}

await init();
$("pgo").onclick = runPairing;
$("ggo").onclick = runGains;
$("ogo").onclick = runErrors;
runPairing();
runGains();
runErrors();
