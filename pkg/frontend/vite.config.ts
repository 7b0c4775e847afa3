import { fileURLToPath } from "node:url";
import { defineConfig } from "vitest/config";

export default defineConfig({
  build: {
    rollupOptions: {
      input: {
        main: fileURLToPath(new URL("./index.html", import.meta.url)),
        glyphs: fileURLToPath(new URL("./glyphs.html", import.meta.url)),
      },
    },
  },
  test: {
    environment: "happy-dom",
  },
});
