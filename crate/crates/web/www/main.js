import init, { evaluate, ratio_curve, series_weights, saddle_point } from "./pkg/rosenthal_web.js";

const $ = (id) => document.getElementById(id);

function fail(el, err) {
  el.innerHTML = `<span class="err">${err.message ?? err}</span>`;
}

function frame(ctx, w, h) {
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#999";
  ctx.beginPath();
  ctx.moveTo(50, 10);
  ctx.lineTo(50, h - 30);
  ctx.lineTo(w - 10, h - 30);
  ctx.stroke();
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
}

function showEval() {
  const out = $("eval-out");
  try {
    const e = evaluate(Number($("eval-p").value));
    out.innerHTML = `<table>
      <tr><th></th><th>value</th><th>route</th></tr>
      <tr><td>K</td><td>${e.k}</td><td>${e.k_route}</td></tr>
      <tr><td>L</td><td>${e.l}</td><td>${e.l_route}</td></tr>
      <tr><td>S</td><td>${e.s}</td><td></td></tr>
      <tr><td>G</td><td>${e.g}</td><td></td></tr>
    </table><p class="note">relative error bound ${e.rel_error.toExponential(1)}</p>`;
    e.free();
  } catch (err) {
    fail(out, err);
  }
}

function plotCurve() {
  const canvas = $("curve");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const msg = $("curve-msg");
  let data;
  try {
    data = ratio_curve($("curve-ratio").value, Number($("curve-lo").value), Number($("curve-hi").value), 400);
  } catch (err) {
    fail(msg, err);
    return;
  }
  const ps = [], rs = [];
  for (let i = 0; i < data.length; i += 2) {
    ps.push(Math.log(data[i]));
    rs.push(data[i + 1]);
  }
  const [x0, x1] = [ps[0], ps[ps.length - 1]];
  const [y0, y1] = [Math.min(...rs), Math.max(...rs)];
  const pad = 0.05 * (y1 - y0 || 1);
  const X = (x) => 50 + ((x - x0) / (x1 - x0)) * (w - 60);
  const Y = (y) => h - 30 - ((y - y0 + pad) / (y1 - y0 + 2 * pad)) * (h - 40);
  frame(ctx, w, h);
  ctx.strokeStyle = "#1565c0";
  ctx.lineWidth = 2;
  ctx.beginPath();
  ps.forEach((x, i) => (i ? ctx.lineTo(X(x), Y(rs[i])) : ctx.moveTo(X(x), Y(rs[i]))));
  ctx.stroke();
  const best = rs.indexOf(y1);
  ctx.fillStyle = "#c62828";
  ctx.beginPath();
  ctx.arc(X(ps[best]), Y(y1), 4, 0, 2 * Math.PI);
  ctx.fill();
  ctx.fillStyle = "#444";
  ctx.fillText(y1.toFixed(5), 4, Y(y1) + 4);
  ctx.fillText(y0.toFixed(5), 4, Y(y0) + 4);
  ctx.fillText(`p = ${data[0]}`, 50, h - 12);
  ctx.fillText(`p = ${data[data.length - 2]} (log scale)`, w - 170, h - 12);
  msg.textContent = `max ${y1.toFixed(6)} at p ≈ ${Math.exp(ps[best]).toFixed(2)} on this grid`;
}

function plotWeights() {
  const canvas = $("weights");
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const msg = $("w-msg");
  const kind = $("w-kind").value;
  const p = Number($("w-p").value);
  let ws, peak;
  try {
    ws = series_weights(kind, p);
    peak = saddle_point(kind, p);
  } catch (err) {
    fail(msg, err);
    return;
  }
  const top = Math.max(...ws);
  const bw = (w - 60) / ws.length;
  frame(ctx, w, h);
  ctx.fillStyle = "#2e7d32";
  ws.forEach((v, n) => {
    const bh = (v / top) * (h - 40);
    ctx.fillRect(50 + n * bw, h - 30 - bh, Math.max(bw - 1, 1), bh);
  });
  const xm = 50 + (peak + 0.5) * bw;
  ctx.strokeStyle = "#c62828";
  ctx.setLineDash([4, 4]);
  ctx.beginPath();
  ctx.moveTo(xm, 10);
  ctx.lineTo(xm, h - 30);
  ctx.stroke();
  ctx.setLineDash([]);
  ctx.fillStyle = "#444";
  ctx.fillText("n = 0", 50, h - 12);
  ctx.fillText(`n = ${ws.length - 1}`, w - 60, h - 12);
  const label = kind === "L" ? "M(p): M log M = p" : "N(p): N log 2N = p";
  msg.textContent = `${ws.length} terms; saddle point ${label} = ${peak.toFixed(3)}`;
}

await init();
$("eval-go").onclick = showEval;
$("curve-go").onclick = plotCurve;
$("w-go").onclick = plotWeights;
showEval();
plotCurve();
plotWeights();
