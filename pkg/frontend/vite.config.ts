import { defineConfig } from "vite";

export default defineConfig({
  build: {
    outDir: "dist",
  },
  server: {
    // During development the Python service runs separately.
    proxy: {
      "/trees": "http://127.0.0.1:8765",
    },
  },
});
