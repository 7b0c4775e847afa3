import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";
import type { CameraState } from "./types.js";

// WebGL scatter view. One rendering path serves both dimensionalities:
// 3-D gets orbit controls, 2-D reuses the same scene with rotation locked
// so only pan and zoom remain. Positions are the server's coordinates,
// untouched; all fitting happens in the camera.

const POINT_SIZE = 9.0;
const SELECTED_SIZE = 16.0;
const FOV_DEG = 45;

const VERTEX_SHADER = `
  attribute vec3 pcolor;
  attribute float hidden;
  attribute float psize;
  varying vec3 vColor;
  varying float vHidden;
  void main() {
    vColor = pcolor;
    vHidden = hidden;
    vec4 mv = modelViewMatrix * vec4(position, 1.0);
    gl_PointSize = psize;
    gl_Position = projectionMatrix * mv;
  }
`;

const FRAGMENT_SHADER = `
  varying vec3 vColor;
  varying float vHidden;
  void main() {
    if (vHidden > 0.5) discard;
    vec2 c = gl_PointCoord - vec2(0.5);
    if (dot(c, c) > 0.25) discard;
    gl_FragColor = vec4(vColor, 1.0);
  }
`;

// Pad 2-D rows with z = 0 so a single buffer layout serves both cases.
export function positionArray(coords: number[][]): Float32Array {
  const out = new Float32Array(coords.length * 3);
  for (let i = 0; i < coords.length; i++) {
    out[i * 3] = coords[i][0];
    out[i * 3 + 1] = coords[i][1];
    out[i * 3 + 2] = coords[i].length > 2 ? coords[i][2] : 0;
  }
  return out;
}

export function boundingSphere(coords: number[][]): { center: [number, number, number]; radius: number } {
  const center: [number, number, number] = [0, 0, 0];
  if (coords.length === 0) return { center, radius: 1 };
  for (const row of coords) {
    center[0] += row[0];
    center[1] += row[1];
    center[2] += row.length > 2 ? row[2] : 0;
  }
  for (let k = 0; k < 3; k++) center[k] /= coords.length;
  let r2 = 0;
  for (const row of coords) {
    const dx = row[0] - center[0];
    const dy = row[1] - center[1];
    const dz = (row.length > 2 ? row[2] : 0) - center[2];
    r2 = Math.max(r2, dx * dx + dy * dy + dz * dz);
  }
  // Degenerate clouds (single point, all duplicates) still need a frustum.
  const radius = Math.sqrt(r2);
  return { center, radius: radius > 0 ? radius : 1e-6 };
}

export function fitDistance(radius: number, fovDeg: number): number {
  return (radius * 1.6) / Math.tan(((fovDeg / 2) * Math.PI) / 180);
}

export function buildGeometry(coords: number[][], colors: [number, number, number][]): THREE.BufferGeometry {
  const n = coords.length;
  const geometry = new THREE.BufferGeometry();
  geometry.setAttribute("position", new THREE.BufferAttribute(positionArray(coords), 3));
  const rgb = new Float32Array(n * 3);
  for (let i = 0; i < n; i++) {
    rgb[i * 3] = colors[i][0];
    rgb[i * 3 + 1] = colors[i][1];
    rgb[i * 3 + 2] = colors[i][2];
  }
  geometry.setAttribute("pcolor", new THREE.BufferAttribute(rgb, 3));
  geometry.setAttribute("hidden", new THREE.BufferAttribute(new Float32Array(n), 1));
  const sizes = new Float32Array(n).fill(POINT_SIZE);
  geometry.setAttribute("psize", new THREE.BufferAttribute(sizes, 1));
  return geometry;
}

// Flip the hidden flag per point. Positions are never rewritten, so the
// marks that stay visible cannot move when a category is toggled.
export function applyVisibility(geometry: THREE.BufferGeometry, mask: boolean[]): void {
  const hidden = geometry.getAttribute("hidden") as THREE.BufferAttribute;
  for (let i = 0; i < mask.length; i++) {
    hidden.setX(i, mask[i] ? 0 : 1);
  }
  hidden.needsUpdate = true;
}

export function applyColors(geometry: THREE.BufferGeometry, colors: [number, number, number][]): void {
  const attr = geometry.getAttribute("pcolor") as THREE.BufferAttribute;
  for (let i = 0; i < colors.length; i++) {
    attr.setXYZ(i, colors[i][0], colors[i][1], colors[i][2]);
  }
  attr.needsUpdate = true;
}

export function applySelection(geometry: THREE.BufferGeometry, index: number | null): void {
  const attr = geometry.getAttribute("psize") as THREE.BufferAttribute;
  for (let i = 0; i < attr.count; i++) {
    attr.setX(i, i === index ? SELECTED_SIZE : POINT_SIZE);
  }
  attr.needsUpdate = true;
}

export interface ScatterCallbacks {
  onHover: (index: number | null) => void;
  onSelect: (index: number | null) => void;
  onCamera: (state: CameraState) => void;
}

export class ScatterView {
  private container: HTMLElement;
  private callbacks: ScatterCallbacks;
  private renderer: THREE.WebGLRenderer;
  private scene: THREE.Scene;
  private camera: THREE.PerspectiveCamera;
  private controls: OrbitControls;
  private raycaster: THREE.Raycaster;
  private points: THREE.Points | null = null;
  private geometry: THREE.BufferGeometry | null = null;
  private mask: boolean[] = [];
  private hoverIndex: number | null = null;
  private disposed = false;

  constructor(container: HTMLElement, callbacks: ScatterCallbacks) {
    this.container = container;
    this.callbacks = callbacks;
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setPixelRatio(window.devicePixelRatio);
    this.renderer.setClearColor(0x11151c);
    container.appendChild(this.renderer.domElement);

    this.scene = new THREE.Scene();
    this.camera = new THREE.PerspectiveCamera(FOV_DEG, 1, 0.001, 1000);
    this.camera.position.set(0, 0, 10);

    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.controls.addEventListener("change", () => {
      this.callbacks.onCamera(this.cameraState());
    });

    this.raycaster = new THREE.Raycaster();

    this.renderer.domElement.addEventListener("mousemove", (ev) => this.handleMove(ev));
    this.renderer.domElement.addEventListener("mouseleave", () => this.setHover(null));
    this.renderer.domElement.addEventListener("click", (ev) => {
      const hit = this.pick(ev);
      this.callbacks.onSelect(hit);
    });
    window.addEventListener("resize", () => this.resize());
    this.resize();
    this.loop();
  }

  setDoc(coords: number[][], colors: [number, number, number][], dims: 2 | 3, camera: CameraState | null): void {
    if (this.points !== null) {
      this.scene.remove(this.points);
      this.geometry?.dispose();
      (this.points.material as THREE.Material).dispose();
    }
    this.geometry = buildGeometry(coords, colors);
    const material = new THREE.ShaderMaterial({
      vertexShader: VERTEX_SHADER,
      fragmentShader: FRAGMENT_SHADER,
    });
    this.points = new THREE.Points(this.geometry, material);
    this.scene.add(this.points);
    this.mask = new Array(coords.length).fill(true);

    const { center, radius } = boundingSphere(coords);
    this.camera.near = radius * 1e-3;
    this.camera.far = radius * 100;
    this.raycaster.params.Points = { threshold: radius * 0.025 };
    this.controls.target.set(center[0], center[1], center[2]);
    // Rotation only makes sense with a third axis; a flat doc gets the
    // same scene with the camera locked square onto the plane.
    this.controls.enableRotate = dims === 3;
    if (camera !== null && this.restore(camera)) {
      // caller's saved pose wins
    } else {
      const d = fitDistance(radius, FOV_DEG);
      if (dims === 3) {
        this.camera.position.set(center[0] + d * 0.6, center[1] + d * 0.45, center[2] + d);
      } else {
        this.camera.position.set(center[0], center[1], center[2] + d);
      }
    }
    this.camera.updateProjectionMatrix();
    this.controls.update();
  }

  setVisibility(mask: boolean[]): void {
    if (this.geometry === null) return;
    this.mask = mask.slice();
    applyVisibility(this.geometry, mask);
  }

  setColors(colors: [number, number, number][]): void {
    if (this.geometry !== null) applyColors(this.geometry, colors);
  }

  setSelected(index: number | null): void {
    if (this.geometry !== null) applySelection(this.geometry, index);
  }

  cameraState(): CameraState {
    const p = this.camera.position;
    const t = this.controls.target;
    return { position: [p.x, p.y, p.z], target: [t.x, t.y, t.z] };
  }

  private restore(state: CameraState): boolean {
    if (!Array.isArray(state.position) || state.position.length !== 3) return false;
    this.camera.position.set(...state.position);
    this.controls.target.set(...state.target);
    return true;
  }

  private pick(ev: MouseEvent): number | null {
    if (this.points === null) return null;
    const rect = this.renderer.domElement.getBoundingClientRect();
    const ndc = new THREE.Vector2(
      ((ev.clientX - rect.left) / rect.width) * 2 - 1,
      -((ev.clientY - rect.top) / rect.height) * 2 + 1,
    );
    this.raycaster.setFromCamera(ndc, this.camera);
    const hits = this.raycaster.intersectObject(this.points);
    for (const hit of hits) {
      const idx = hit.index ?? -1;
      if (idx >= 0 && this.mask[idx]) return idx;
    }
    return null;
  }

  private handleMove(ev: MouseEvent): void {
    this.setHover(this.pick(ev));
  }

  private setHover(index: number | null): void {
    if (index === this.hoverIndex) return;
    this.hoverIndex = index;
    this.callbacks.onHover(index);
  }

  private resize(): void {
    const w = this.container.clientWidth || 1;
    const h = this.container.clientHeight || 1;
    this.renderer.setSize(w, h);
    this.camera.aspect = w / h;
    this.camera.updateProjectionMatrix();
  }

  private loop(): void {
    if (this.disposed) return;
    requestAnimationFrame(() => this.loop());
    this.controls.update();
    this.renderer.render(this.scene, this.camera);
  }

  dispose(): void {
    this.disposed = true;
    this.geometry?.dispose();
    this.renderer.dispose();
  }
}
