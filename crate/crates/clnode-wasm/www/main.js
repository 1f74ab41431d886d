// Static driver for the clnode demo. No framework; the wasm module does
// all arithmetic, this file only draws.

import init, { h_curve, theorem_check, valuation_pattern } from "./pkg/clnode_wasm.js";

const status = document.getElementById("status");

function debounce(fn, ms) {
  let id = null;
  return (...args) => {
    clearTimeout(id);
    id = setTimeout(() => fn(...args), ms);
  };
}

// --- section 1: curve explorer ---------------------------------------------

const canvas = document.getElementById("curve");
const ctx = canvas.getContext("2d");

function drawCurve() {
  const t = document.getElementById("tslider").value;
  document.getElementById("tval").value = Number(t).toFixed(2);
  const xmax = Number(document.getElementById("xmax").value) || 4.5;
  const samples = Number(document.getElementById("samples").value) || 161;
  status.textContent = "evaluating H(x;t) at " + samples + " certified points…";
  setTimeout(() => {
    const data = JSON.parse(h_curve(t, 0.0, xmax, samples, 128));
    if (data.error) { status.textContent = "error: " + data.error; return; }
    render(data, xmax);
    status.textContent = "";
  }, 10);
}

function render(data, xmax) {
  const W = canvas.width, H = canvas.height;
  ctx.clearRect(0, 0, W, H);
  const points = data.points;

  // vertical scale from H values and clipped local-series values
  let lo = 0, hi = 1;
  for (const p of points) {
    if (Number.isFinite(p.h)) { lo = Math.min(lo, p.h); hi = Math.max(hi, p.h); }
  }
  hi = Math.min(Math.max(hi * 1.15, 2), 60);
  lo = Math.max(lo * 1.15, -60);
  const sx = x => (x / xmax) * (W - 70) + 60;
  const sy = y => H - 30 - ((y - lo) / (hi - lo)) * (H - 60);

  // axes
  ctx.strokeStyle = "#999"; ctx.lineWidth = 1; ctx.beginPath();
  ctx.moveTo(sx(0), sy(lo)); ctx.lineTo(sx(0), sy(hi));
  ctx.moveTo(sx(0), sy(0)); ctx.lineTo(sx(xmax), sy(0));
  ctx.stroke();
  ctx.fillStyle = "#666"; ctx.font = "22px ui-monospace, monospace";
  for (let gx = 1; gx <= xmax; gx++) {
    ctx.fillText(String(gx), sx(gx) - 6, sy(0) + 26);
    ctx.fillRect(sx(gx), sy(0) - 4, 1, 8);
  }
  ctx.fillText("1", sx(0) - 26, sy(1) + 7);
  ctx.fillRect(sx(0) - 4, sy(1), 8, 1);

  // pole markers x = t^-i
  ctx.strokeStyle = "#bbb"; ctx.setLineDash([8, 6]);
  for (let p = data.t_inverse; p <= xmax; p *= data.t_inverse) {
    ctx.beginPath(); ctx.moveTo(sx(p), sy(lo)); ctx.lineTo(sx(p), sy(hi)); ctx.stroke();
  }
  ctx.setLineDash([]);

  // local series (clipped at the frame, broken at nulls)
  ctx.strokeStyle = "#c54a0b"; ctx.lineWidth = 2.5; ctx.beginPath();
  let pen = false;
  for (const p of points) {
    if (p.zhat === null || !Number.isFinite(p.zhat) || Math.abs(p.zhat) > 1e6) { pen = false; continue; }
    const y = Math.min(Math.max(p.zhat, lo), hi);
    if (!pen) { ctx.moveTo(sx(p.x), sy(y)); pen = true; }
    else ctx.lineTo(sx(p.x), sy(y));
    if (y !== p.zhat) pen = false; // break the stroke where clipped
  }
  ctx.stroke();

  // H itself
  ctx.strokeStyle = "#0b63c5"; ctx.lineWidth = 3; ctx.beginPath();
  pen = false;
  for (const p of points) {
    if (!Number.isFinite(p.h)) { pen = false; continue; }
    if (!pen) { ctx.moveTo(sx(p.x), sy(p.h)); pen = true; }
    else ctx.lineTo(sx(p.x), sy(p.h));
  }
  ctx.stroke();
}

// --- section 2: census verifier ---------------------------------------------

function runCensus() {
  const q = document.getElementById("qsel").value;
  const n = document.getElementById("nsel").value;
  status.textContent = "enumerating matrices over F_" + q + "…";
  setTimeout(() => {
    const data = JSON.parse(theorem_check(Number(n), Number(q)));
    const body = document.querySelector("#censusTable tbody");
    body.innerHTML = "";
    if (data.error) { status.textContent = "error: " + data.error; return; }
    for (const row of data.rows) {
      const tr = document.createElement("tr");
      if (row.skipped) {
        tr.innerHTML = `<td>${row.n}</td><td colspan="5" style="text-align:left">skipped — ${row.skipped}</td>`;
      } else {
        tr.innerHTML =
          `<td>${row.n}</td><td>${row.census}</td><td>${row.gl_order}</td>` +
          `<td>${row.ratio}</td><td>${row.coefficient}</td>` +
          `<td class="${row.equal ? "ok" : "bad"}">${row.equal ? "=" : "MISMATCH"}</td>`;
      }
      body.appendChild(tr);
    }
    status.textContent = "";
  }, 10);
}

// --- section 3: valuation pattern --------------------------------------------

function runValuations() {
  const n = document.getElementById("nslider").value;
  document.getElementById("nval").value = n;
  const data = JSON.parse(valuation_pattern(Number(n)));
  const body = document.querySelector("#valTable tbody");
  body.innerHTML = "";
  if (data.error) { status.textContent = "error: " + data.error; return; }
  for (const row of data.rows) {
    const tr = document.createElement("tr");
    tr.innerHTML =
      `<td>${row.n}</td><td>${row.valuation ?? "—"}</td><td>${row.expected_valuation}</td>` +
      `<td>${row.sign > 0 ? "+" : row.sign < 0 ? "−" : "0"}</td>` +
      `<td>${row.expected_sign > 0 ? "+" : "−"}</td>` +
      `<td class="${row.matches ? "ok" : "bad"}">${row.matches ? "yes" : "NO"}</td>`;
    body.appendChild(tr);
  }
}

// --- boot ---------------------------------------------------------------------

init().then(() => {
  status.textContent = "";
  drawCurve();
  runValuations();
  runCensus();
  document.getElementById("tslider").addEventListener("input", debounce(drawCurve, 250));
  document.getElementById("xmax").addEventListener("change", drawCurve);
  document.getElementById("samples").addEventListener("change", drawCurve);
  document.getElementById("runCensus").addEventListener("click", runCensus);
  document.getElementById("nslider").addEventListener("input", debounce(runValuations, 200));
}).catch(e => {
  status.textContent = "wasm module missing — build it first (see the footer note). " + e;
});
