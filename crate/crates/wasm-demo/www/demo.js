import init, { scene, distance } from "./pkg/bregman_cc_wasm.js";

const views = {
  negative_entropy: { box: [-0.3, 4.2], points: [[1, 1], [2, 1], [1, 3]] },
  energy: { box: [-3, 3], points: [[-1.5, -1], [2, -0.5], [0, 2]] },
  fermi_dirac: { box: [-0.05, 1.05], points: [[0.25, 0.25], [0.6, 0.3], [0.3, 0.7]] },
  burg_entropy: { box: [-0.3, 4.2], points: [[1, 2], [0.5, 1.5], [1.5, 1]] },
};

const centers = [
  { key: "backward_cc", label: "backward circumcenter", color: "#c0392b", balls: "backward-balls" },
  { key: "forward_cc", label: "forward circumcenter", color: "#2471a3", balls: "forward-balls" },
  { key: "backward_pseudo", label: "backward pseudo-circumcenter", color: "#e67e22" },
  { key: "forward_pseudo", label: "forward pseudo-circumcenter", color: "#16a085" },
];

const canvas = document.getElementById("view");
const ctx = canvas.getContext("2d");
const select = document.getElementById("function");
let fn = select.value;
let points = views[fn].points.map((p) => p.slice());
let dragging = -1;
let result = null;

const toScreen = ([x, y]) => {
  const [a, b] = views[fn].box;
  return [((x - a) / (b - a)) * canvas.width, canvas.height - ((y - a) / (b - a)) * canvas.height];
};
const toWorld = (sx, sy) => {
  const [a, b] = views[fn].box;
  return [a + (sx / canvas.width) * (b - a), a + ((canvas.height - sy) / canvas.height) * (b - a)];
};

function recompute() {
  result = JSON.parse(scene(fn, new Float64Array(points.flat()), true));
  draw();
  table();
}

function drawAxes() {
  ctx.strokeStyle = "#ddd";
  ctx.lineWidth = 1;
  const [ox, oy] = toScreen([0, 0]);
  ctx.beginPath();
  ctx.moveTo(0, oy); ctx.lineTo(canvas.width, oy);
  ctx.moveTo(ox, 0); ctx.lineTo(ox, canvas.height);
  ctx.stroke();
}

function dot(p, color, r) {
  const [x, y] = toScreen(p);
  ctx.fillStyle = color;
  ctx.beginPath();
  ctx.arc(x, y, r, 0, 2 * Math.PI);
  ctx.fill();
}

function draw() {
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  drawAxes();
  for (const c of centers) {
    const found = result[c.key];
    if (!c.balls || !document.getElementById(c.balls).checked) continue;
    ctx.strokeStyle = c.color;
    ctx.globalAlpha = 0.55;
    for (const ball of found.balls) {
      ctx.beginPath();
      ball.forEach((p, i) => {
        const [x, y] = toScreen(p);
        i ? ctx.lineTo(x, y) : ctx.moveTo(x, y);
      });
      ctx.closePath();
      ctx.stroke();
    }
    ctx.globalAlpha = 1;
  }
  if (result.classical) dot(result.classical, "#888", 4);
  for (const c of centers) {
    if (result[c.key].point) dot(result[c.key].point, c.color, 5);
  }
  for (const p of points) dot(p, "#111", 6);
}

const fmt = (x) => (Number.isFinite(x) ? x.toFixed(5) : "–");

function table() {
  const rows = centers.map((c) => {
    const found = result[c.key];
    const where = found.point ? `(${fmt(found.point[0])}, ${fmt(found.point[1])})` : found.status;
    return `<tr><td><span class="swatch" style="background:${c.color}"></span>${c.label}</td><td>${where}</td></tr>`;
  });
  const cl = result.classical ? `(${fmt(result.classical[0])}, ${fmt(result.classical[1])})` : "none";
  rows.push(`<tr><td><span class="swatch" style="background:#888"></span>classical circumcenter</td><td>${cl}</td></tr>`);
  document.getElementById("centers").innerHTML = rows.join("");
  document.getElementById("error").textContent = result.error ?? "";
}

function hit(sx, sy) {
  return points.findIndex((p) => {
    const [x, y] = toScreen(p);
    return Math.hypot(x - sx, y - sy) < 9;
  });
}

canvas.addEventListener("mousedown", (e) => {
  const i = hit(e.offsetX, e.offsetY);
  if (i >= 0 && e.shiftKey) {
    if (points.length > 1) points.splice(i, 1);
    recompute();
  } else if (i >= 0) {
    dragging = i;
  } else {
    points.push(toWorld(e.offsetX, e.offsetY));
    recompute();
  }
});

canvas.addEventListener("mousemove", (e) => {
  const w = toWorld(e.offsetX, e.offsetY);
  if (dragging >= 0) {
    points[dragging] = w;
    recompute();
  }
  const ds = points.map((q) => fmt(distance(fn, new Float64Array(w), new Float64Array(q))));
  document.getElementById("hover").textContent = `D(cursor, q_i) = ${ds.join(", ")}`;
});

window.addEventListener("mouseup", () => { dragging = -1; });

select.addEventListener("change", () => {
  fn = select.value;
  points = views[fn].points.map((p) => p.slice());
  recompute();
});
for (const id of ["backward-balls", "forward-balls"]) {
  document.getElementById(id).addEventListener("change", draw);
}

await init();
recompute();
