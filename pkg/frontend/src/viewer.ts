/**
 * Three.js canopy viewer: one point per voxel, orbit camera, screen-space
 * picking, and suggestion markers rendered as black points.
 */

import * as THREE from "three";
import { OrbitControls } from "three/examples/jsm/controls/OrbitControls.js";

import type { LightfieldResponse, SuggestionEntry, Vec3, VoxelEntry } from "./api";
import { SUGGESTION_BLACK, colorForVoxel, type ColorMode } from "./colors";
import { DEFAULT_PICK_TOLERANCE_PX, pickNearest, type ProjectedPoint } from "./picking";

const POINT_SIZE = 0.12;
const MARKER_SIZE = 0.3;

export class CanopyViewer {
  private renderer: THREE.WebGLRenderer;
  private scene: THREE.Scene;
  private camera: THREE.PerspectiveCamera;
  private controls: OrbitControls;
  private points: THREE.Points | null = null;
  private markers: THREE.Points | null = null;
  private voxels: VoxelEntry[] = [];

  constructor(private container: HTMLElement) {
    this.renderer = new THREE.WebGLRenderer({ antialias: true });
    this.renderer.setClearColor(0xf4f4f0);
    this.scene = new THREE.Scene();
    this.camera = new THREE.PerspectiveCamera(55, 1, 0.01, 500);
    this.camera.position.set(8, -8, 4);
    this.camera.up.set(0, 0, 1);
    this.controls = new OrbitControls(this.camera, this.renderer.domElement);
    this.controls.addEventListener("change", () => this.render());
    container.appendChild(this.renderer.domElement);
    this.resize();
    window.addEventListener("resize", () => this.resize());
  }

  get canvas(): HTMLCanvasElement {
    return this.renderer.domElement;
  }

  resize(): void {
    const width = this.container.clientWidth || 800;
    const height = this.container.clientHeight || 600;
    this.renderer.setSize(width, height);
    this.camera.aspect = width / height;
    this.camera.updateProjectionMatrix();
    this.render();
  }

  /** Rebuild the point geometry for a new light field. */
  setLightfield(field: LightfieldResponse): void {
    this.voxels = field.voxels;
    if (this.points) {
      this.scene.remove(this.points);
      this.points.geometry.dispose();
      (this.points.material as THREE.Material).dispose();
      this.points = null;
    }
    if (!field.voxels.length) return;
    const positions = new Float32Array(field.voxels.length * 3);
    for (let i = 0; i < field.voxels.length; i++) {
      positions.set(field.voxels[i].centroid, i * 3);
    }
    const geometry = new THREE.BufferGeometry();
    geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
    geometry.setAttribute(
      "color",
      new THREE.BufferAttribute(new Float32Array(field.voxels.length * 3), 3),
    );
    const material = new THREE.PointsMaterial({
      size: POINT_SIZE,
      vertexColors: true,
      sizeAttenuation: true,
    });
    this.points = new THREE.Points(geometry, material);
    this.scene.add(this.points);
    const box = new THREE.Box3().setFromBufferAttribute(
      geometry.getAttribute("position") as THREE.BufferAttribute,
    );
    this.controls.target.copy(box.getCenter(new THREE.Vector3()));
    this.controls.update();
  }

  /** Recolor in place; no geometry rebuild, no refetch. */
  applyColors(mode: ColorMode, removedCells: ReadonlySet<string> | null): void {
    if (!this.points) return;
    const colors = this.points.geometry.getAttribute("color") as THREE.BufferAttribute;
    for (let i = 0; i < this.voxels.length; i++) {
      const [r, g, b] = colorForVoxel(this.voxels[i], mode, removedCells);
      colors.setXYZ(i, r, g, b);
    }
    colors.needsUpdate = true;
    this.render();
  }

  /** Suggestion cut points drawn as black points over the canopy. */
  setSuggestionMarkers(suggestions: readonly SuggestionEntry[]): void {
    if (this.markers) {
      this.scene.remove(this.markers);
      this.markers.geometry.dispose();
      (this.markers.material as THREE.Material).dispose();
      this.markers = null;
    }
    if (!suggestions.length) {
      this.render();
      return;
    }
    const positions = new Float32Array(suggestions.length * 3);
    suggestions.forEach((s, i) => positions.set(s.location, i * 3));
    const geometry = new THREE.BufferGeometry();
    geometry.setAttribute("position", new THREE.BufferAttribute(positions, 3));
    const material = new THREE.PointsMaterial({
      size: MARKER_SIZE,
      color: new THREE.Color(...SUGGESTION_BLACK),
      sizeAttenuation: true,
    });
    this.markers = new THREE.Points(geometry, material);
    this.scene.add(this.markers);
    this.render();
  }

  /** Project every voxel to pixels for screen-space picking. */
  projectedPoints(): ProjectedPoint[] {
    const rect = this.canvas.getBoundingClientRect();
    const out: ProjectedPoint[] = [];
    const vec = new THREE.Vector3();
    for (let i = 0; i < this.voxels.length; i++) {
      vec.set(...this.voxels[i].centroid);
      vec.project(this.camera);
      if (vec.z < -1 || vec.z > 1) continue; // behind the camera or clipped
      out.push({
        index: i,
        x: ((vec.x + 1) / 2) * rect.width,
        y: ((1 - vec.y) / 2) * rect.height,
        depth: vec.z,
      });
    }
    return out;
  }

  /** The clicked voxel's centroid, or null for empty sky. */
  pickAt(clientX: number, clientY: number): { index: number; centroid: Vec3 } | null {
    const rect = this.canvas.getBoundingClientRect();
    const hit = pickNearest(
      this.projectedPoints(),
      clientX - rect.left,
      clientY - rect.top,
      DEFAULT_PICK_TOLERANCE_PX,
    );
    if (hit === null) return null;
    return { index: hit.index, centroid: this.voxels[hit.index].centroid };
  }

  render(): void {
    this.renderer.render(this.scene, this.camera);
  }
}
