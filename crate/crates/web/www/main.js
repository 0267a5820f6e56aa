import init, { simulate, phaseCurve, densityCurve } from "./pkg/entwalk_web.js";

const $ = (id) => document.getElementById(id);

function frame(canvas, xmin, xmax, ymin, ymax) {
  const ctx = canvas.getContext("2d");
  const w = canvas.width, h = canvas.height, pad = 30;
  ctx.clearRect(0, 0, w, h);
  ctx.strokeStyle = "#bbb";
  ctx.strokeRect(pad, 5, w - pad - 5, h - pad - 5);
  const sx = (x) => pad + ((x - xmin) / (xmax - xmin)) * (w - pad - 5);
  const sy = (y) => h - pad - ((y - ymin) / (ymax - ymin)) * (h - pad - 10);
  ctx.fillStyle = "#444";
  ctx.font = "12px system-ui";
  ctx.fillText(xmin.toFixed(2), pad, h - 10);
  ctx.fillText(xmax.toFixed(2), w - 45, h - 10);
  ctx.fillText(ymax.toPrecision(3), 2, 15);
  return { ctx, sx, sy };
}

function line(ctx, xs, ys, sx, sy, color) {
  ctx.strokeStyle = color;
  ctx.lineWidth = 1.5;
  ctx.beginPath();
  xs.forEach((x, i) => (i ? ctx.lineTo(sx(x), sy(ys[i])) : ctx.moveTo(sx(x), sy(ys[i]))));
  ctx.stroke();
}

function params() {
  return {
    beta: parseFloat($("beta").value),
    alpha: new Float64Array($("alpha").value.split(",").map(Number)),
    t: parseInt($("steps").value, 10),
  };
}

function drawWalk({ beta, alpha, t }) {
  const start = performance.now();
  const p = simulate(beta, alpha, t);
  const ms = performance.now() - start;
  const xs = Array.from(p, (_, i) => i - t);
  const top = Math.max(...p);
  const { ctx, sx, sy } = frame($("walk"), -t, t, 0, top);
  line(ctx, xs, p, sx, sy, "#1f5fa8");
  $("walk-note").textContent =
    `p_t(0) = ${p[t].toFixed(6)}, max p_t = ${top.toFixed(6)}, simulated in ${ms.toFixed(1)} ms`;
}

function drawPhase({ beta }) {
  const data = phaseCurve(beta, 512);
  const k = [], phi = [], dphi = [];
  for (let i = 0; i < data.length; i += 3) {
    k.push(data[i]); phi.push(data[i + 1]); dphi.push(data[i + 2]);
  }
  const { ctx, sx, sy } = frame($("phase"), 0, 2 * Math.PI, -Math.PI / 2, Math.PI / 2);
  line(ctx, k, phi, sx, sy, "#1f5fa8");
  line(ctx, k, dphi, sx, sy, "#c0392b");
  const m = Math.max(...dphi.map(Math.abs));
  $("phase-note").textContent =
    `blue: φ(k), red: φ′(k). Front speed M = max |φ′| = ${m.toFixed(6)}; spikes travel at x ≈ ±Mt.`;
}

function drawDensity({ alpha }) {
  const data = densityCurve(alpha, 800);
  const c00 = data[0], y = [], f = [];
  for (let i = 1; i < data.length; i += 2) {
    y.push(data[i]); f.push(data[i + 1]);
  }
  const top = Math.min(Math.max(...f), 5);
  const { ctx, sx, sy } = frame($("density"), -Math.SQRT1_2, Math.SQRT1_2, 0, top);
  line(ctx, y, f.map((v) => Math.min(v, top)), sx, sy, "#27864a");
  $("density-note").textContent =
    `point mass at y = 0: c00 = ${c00.toFixed(6)}; continuous part clipped at ${top.toFixed(2)}`;
}

function redraw() {
  const p = params();
  $("beta-out").textContent = p.beta.toFixed(2);
  $("steps-out").textContent = p.t;
  try {
    $("error").textContent = "";
    drawWalk(p);
    drawPhase(p);
    drawDensity(p);
  } catch (e) {
    $("error").textContent = String(e);
  }
}

await init();
for (const id of ["beta", "alpha", "steps"]) $(id).addEventListener("input", redraw);
redraw();
