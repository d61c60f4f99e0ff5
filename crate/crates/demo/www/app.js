import init, {
  bell_parameters, fidelity_curve, chsh_explorer, simulate_and_fit,
} from "./pkg/qdbell_demo.js";

const $ = (id) => document.getElementById(id);
const val = (id) => parseFloat($(id).value);

function plot(canvas, series, yRange, xRange) {
  const ctx = canvas.getContext("2d");
  const { width: w, height: h } = canvas;
  const pad = 36;
  ctx.clearRect(0, 0, w, h);
  const sx = (x) => pad + (x - xRange[0]) / (xRange[1] - xRange[0]) * (w - 2 * pad);
  const sy = (y) => h - pad - (y - yRange[0]) / (yRange[1] - yRange[0]) * (h - 2 * pad);
  ctx.strokeStyle = "#999";
  ctx.strokeRect(pad, pad, w - 2 * pad, h - 2 * pad);
  ctx.fillStyle = "#555";
  ctx.font = "12px system-ui";
  ctx.fillText(yRange[1].toFixed(2), 2, pad + 4);
  ctx.fillText(yRange[0].toFixed(2), 2, h - pad + 4);
  ctx.fillText(xRange[0].toString(), pad, h - pad + 16);
  ctx.fillText(xRange[1].toString(), w - pad - 16, h - pad + 16);
  for (const s of series) {
    ctx.strokeStyle = s.color;
    ctx.fillStyle = s.color;
    if (s.points) {
      s.xs.forEach((x, i) => ctx.fillRect(sx(x) - 2, sy(s.ys[i]) - 2, 4, 4));
    } else {
      ctx.beginPath();
      s.xs.forEach((x, i) => (i ? ctx.lineTo : ctx.moveTo).call(ctx, sx(x), sy(s.ys[i])));
      ctx.stroke();
    }
    if (s.level !== undefined) {
      ctx.setLineDash([4, 4]);
      ctx.beginPath();
      ctx.moveTo(sx(xRange[0]), sy(s.level));
      ctx.lineTo(sx(xRange[1]), sy(s.level));
      ctx.stroke();
      ctx.setLineDash([]);
    }
  }
}

function showOutputs() {
  for (const el of document.querySelectorAll("input[type=range]")) {
    $(el.id + "-out").textContent = el.value;
  }
}

function updateBell() {
  const s = val("s"), tau = val("tau"), noise = val("noise"), gated = $("gated").checked;
  const row = $("bell-row");
  row.querySelectorAll("td").forEach((td) => td.remove());
  try {
    for (const x of bell_parameters(s, tau, noise, gated)) {
      const td = document.createElement("td");
      td.textContent = x.toFixed(3);
      row.appendChild(td);
    }
    const n = 121, max = 3;
    const f = fidelity_curve(tau, noise, gated, max, n);
    const xs = Array.from({ length: n }, (_, i) => i * max / (n - 1));
    plot($("fidelity"), [
      { xs, ys: Array.from(f), color: "#1565c0", level: 0.5 },
      { xs: [s], ys: [bell_parameters(s, tau, noise, gated)[3]], color: "#c62828", points: true },
    ], [0.25, 1], [0, max]);
  } catch (e) {
    $("status").textContent = String(e);
  }
}

function updateChsh() {
  try {
    const r = chsh_explorer(val("a"), val("a2"), val("b"), val("b2"), val("v"));
    $("terms").textContent = Array.from(r.slice(0, 4), (x) => x.toFixed(3)).join(", ");
    $("chsh").textContent = r[4].toFixed(4) + (Math.abs(r[4]) > 2 ? "  (violates |S| ≤ 2)" : "");
    $("smax").textContent = r[5].toFixed(4);
  } catch (e) {
    $("terms").textContent = String(e);
    $("chsh").textContent = "";
  }
}

let seed = 1;
function updateScan() {
  try {
    const fit = simulate_and_fit(val("ss"), 10, val("sn"), Math.round(val("sp")), BigInt(seed));
    const n = 361;
    const grid = Array.from({ length: n }, (_, i) => i * 180 / n);
    plot($("scan"), [
      { xs: Array.from(fit.angles()), ys: Array.from(fit.values()), color: "#333", points: true },
      { xs: grid, ys: Array.from(fit.curve(n)), color: "#2e7d32" },
    ], [-1.4, 1.4], [0, 180]);
    $("fit").textContent =
      `S = ${fit.splitting_uev.toFixed(3)} ± ${fit.sigma_uev.toFixed(3)} µeV, ` +
      `phase ${fit.phase_deg.toFixed(1)}°, ` +
      (fit.verdict ? "below 0.5 µeV" : "not shown to be below 0.5 µeV");
    fit.free();
  } catch (e) {
    $("fit").textContent = String(e);
  }
}

await init();
$("status").textContent = "";
for (const el of document.querySelectorAll("input")) {
  el.addEventListener("input", () => {
    showOutputs();
    updateBell();
    updateChsh();
    updateScan();
  });
}
$("reseed").addEventListener("click", () => { seed += 1; updateScan(); });
showOutputs();
updateBell();
updateChsh();
updateScan();
