// Generated by scripts/make_demos.py; do not edit by hand.
import type { ManifestJson } from "./protocol.js";

export const MANIFESTS: Record<string, ManifestJson> = {
  "integrated": {
    "tables": [
      {
        "columns": [
          {
            "kind": "categorical",
            "name": "name"
          },
          {
            "kind": "quantitative",
            "name": "protein"
          }
        ],
        "key": "name",
        "name": "protein_t",
        "rows": [
          {
            "name": "almondy",
            "protein": 1.0
          },
          {
            "name": "branflakes",
            "protein": 6.0
          },
          {
            "name": "cocoapuff",
            "protein": 4.0
          },
          {
            "name": "cornpops",
            "protein": 2.0
          },
          {
            "name": "fruitrings",
            "protein": 7.0
          },
          {
            "name": "granola",
            "protein": 5.0
          },
          {
            "name": "honeyohs",
            "protein": 3.0
          },
          {
            "name": "oatsquares",
            "protein": 1.0
          },
          {
            "name": "riceclusters",
            "protein": 6.0
          },
          {
            "name": "wheatbits",
            "protein": 4.0
          }
        ]
      },
      {
        "columns": [
          {
            "kind": "categorical",
            "name": "name"
          },
          {
            "kind": "quantitative",
            "name": "calories"
          }
        ],
        "key": "name",
        "name": "calories_t",
        "rows": [
          {
            "calories": 90.0,
            "name": "almondy"
          },
          {
            "calories": 107.0,
            "name": "branflakes"
          },
          {
            "calories": 124.0,
            "name": "cocoapuff"
          },
          {
            "calories": 141.0,
            "name": "cornpops"
          },
          {
            "calories": 158.0,
            "name": "fruitrings"
          },
          {
            "calories": 85.0,
            "name": "granola"
          },
          {
            "calories": 102.0,
            "name": "honeyohs"
          },
          {
            "calories": 119.0,
            "name": "oatsquares"
          },
          {
            "calories": 136.0,
            "name": "riceclusters"
          },
          {
            "calories": 153.0,
            "name": "wheatbits"
          }
        ]
      }
    ],
    "views": [
      {
        "chart": "linechart",
        "encodings": {
          "value": "protein"
        },
        "halfExtents": [
          0.25,
          0.2,
          0.01
        ],
        "id": "protein-line",
        "pose": {
          "pos": [
            0.0,
            1.0,
            0.0
          ],
          "rot": [
            0.0,
            0.0,
            0.0,
            1.0
          ],
          "scale": 1.0
        },
        "table": "protein_t"
      },
      {
        "chart": "barchart",
        "encodings": {
          "value": "calories"
        },
        "halfExtents": [
          0.25,
          0.2,
          0.01
        ],
        "id": "calorie-bars",
        "pose": {
          "pos": [
            2.0,
            1.0,
            0.0
          ],
          "rot": [
            0.0,
            0.0,
            0.0,
            1.0
          ],
          "scale": 1.0
        },
        "table": "calories_t"
      }
    ]
  },
  "juxtaposed": {
    "tables": [
      {
        "columns": [
          {
            "kind": "categorical",
            "name": "name"
          },
          {
            "kind": "quantitative",
            "name": "sugar"
          },
          {
            "kind": "quantitative",
            "name": "protein"
          },
          {
            "kind": "quantitative",
            "name": "calories"
          },
          {
            "kind": "quantitative",
            "name": "fiber"
          }
        ],
        "key": "name",
        "name": "cereals",
        "rows": [
          {
            "calories": 90.0,
            "fiber": 0.0,
            "name": "almondy",
            "protein": 1.0,
            "sugar": 2.0
          },
          {
            "calories": 107.0,
            "fiber": 2.0,
            "name": "branflakes",
            "protein": 6.0,
            "sugar": 5.0
          },
          {
            "calories": 124.0,
            "fiber": 4.0,
            "name": "cocoapuff",
            "protein": 4.0,
            "sugar": 8.0
          },
          {
            "calories": 141.0,
            "fiber": 6.0,
            "name": "cornpops",
            "protein": 2.0,
            "sugar": 11.0
          },
          {
            "calories": 158.0,
            "fiber": 8.0,
            "name": "fruitrings",
            "protein": 7.0,
            "sugar": 3.0
          },
          {
            "calories": 85.0,
            "fiber": 1.0,
            "name": "granola",
            "protein": 5.0,
            "sugar": 6.0
          },
          {
            "calories": 102.0,
            "fiber": 3.0,
            "name": "honeyohs",
            "protein": 3.0,
            "sugar": 9.0
          },
          {
            "calories": 119.0,
            "fiber": 5.0,
            "name": "oatsquares",
            "protein": 1.0,
            "sugar": 12.0
          },
          {
            "calories": 136.0,
            "fiber": 7.0,
            "name": "riceclusters",
            "protein": 6.0,
            "sugar": 4.0
          },
          {
            "calories": 153.0,
            "fiber": 0.0,
            "name": "wheatbits",
            "protein": 4.0,
            "sugar": 7.0
          }
        ]
      }
    ],
    "views": [
      {
        "chart": "scatterplot",
        "encodings": {
          "x": "sugar",
          "y": "protein"
        },
        "halfExtents": [
          0.3,
          0.25,
          0.01
        ],
        "id": "scatter",
        "pose": {
          "pos": [
            0.0,
            0.0,
            0.0
          ],
          "rot": [
            0.0,
            0.0,
            0.0,
            1.0
          ],
          "scale": 1.0
        },
        "table": "cereals"
      }
    ]
  },
  "nested": {
    "tables": [
      {
        "columns": [
          {
            "kind": "categorical",
            "name": "id"
          }
        ],
        "key": "id",
        "name": "players",
        "rows": [
          {
            "id": "p1"
          },
          {
            "id": "p2"
          },
          {
            "id": "p3"
          },
          {
            "id": "p4"
          },
          {
            "id": "p5"
          }
        ]
      },
      {
        "columns": [
          {
            "kind": "categorical",
            "name": "id"
          },
          {
            "kind": "quantitative",
            "name": "strength"
          },
          {
            "kind": "quantitative",
            "name": "agility"
          },
          {
            "kind": "quantitative",
            "name": "endurance"
          },
          {
            "kind": "quantitative",
            "name": "intelligence"
          }
        ],
        "key": "id",
        "name": "stats",
        "rows": [
          {
            "agility": 2.0,
            "endurance": 4.0,
            "id": "p1",
            "intelligence": 1.0,
            "strength": 3.0
          },
          {
            "agility": 5.0,
            "endurance": 5.0,
            "id": "p2",
            "intelligence": 5.0,
            "strength": 5.0
          },
          {
            "agility": 8.0,
            "endurance": 6.0,
            "id": "p3",
            "intelligence": 2.0,
            "strength": 7.0
          },
          {
            "agility": 3.0,
            "endurance": 7.0,
            "id": "p4",
            "intelligence": 6.0,
            "strength": 4.0
          },
          {
            "agility": 7.0,
            "endurance": 4.0,
            "id": "p5",
            "intelligence": 3.0,
            "strength": 6.0
          }
        ]
      }
    ],
    "views": [
      {
        "chart": "graph",
        "encodings": {
          "edges": [
            [
              "p1",
              "p2"
            ],
            [
              "p2",
              "p3"
            ],
            [
              "p3",
              "p4"
            ],
            [
              "p4",
              "p5"
            ],
            [
              "p5",
              "p1"
            ]
          ],
          "nodes": [
            {
              "key": "p1",
              "pos": [
                0.35,
                0.0
              ]
            },
            {
              "key": "p2",
              "pos": [
                0.108156,
                0.33287
              ]
            },
            {
              "key": "p3",
              "pos": [
                -0.283156,
                0.205725
              ]
            },
            {
              "key": "p4",
              "pos": [
                -0.283156,
                -0.205725
              ]
            },
            {
              "key": "p5",
              "pos": [
                0.108156,
                -0.33287
              ]
            }
          ]
        },
        "halfExtents": [
          0.5,
          0.5,
          0.01
        ],
        "id": "graph",
        "pose": {
          "pos": [
            0.0,
            0.0,
            0.0
          ],
          "rot": [
            0.0,
            0.0,
            0.0,
            1.0
          ],
          "scale": 1.0
        },
        "table": "players"
      },
      {
        "chart": "stackedbar",
        "encodings": {
          "values": [
            "strength",
            "agility",
            "endurance",
            "intelligence"
          ]
        },
        "halfExtents": [
          0.25,
          0.2,
          0.01
        ],
        "id": "stats-bars",
        "pose": {
          "pos": [
            1.2,
            0.0,
            0.0
          ],
          "rot": [
            0.0,
            0.0,
            0.0,
            1.0
          ],
          "scale": 1.0
        },
        "table": "stats"
      }
    ]
  },
  "overloaded": {
    "tables": [
      {
        "columns": [
          {
            "kind": "categorical",
            "name": "name"
          },
          {
            "kind": "quantitative",
            "name": "sugar"
          },
          {
            "kind": "quantitative",
            "name": "protein"
          },
          {
            "kind": "quantitative",
            "name": "calories"
          },
          {
            "kind": "quantitative",
            "name": "fiber"
          }
        ],
        "key": "name",
        "name": "cereals",
        "rows": [
          {
            "calories": 90.0,
            "fiber": 0.0,
            "name": "almondy",
            "protein": 1.0,
            "sugar": 2.0
          },
          {
            "calories": 107.0,
            "fiber": 2.0,
            "name": "branflakes",
            "protein": 6.0,
            "sugar": 5.0
          },
          {
            "calories": 124.0,
            "fiber": 4.0,
            "name": "cocoapuff",
            "protein": 4.0,
            "sugar": 8.0
          },
          {
            "calories": 141.0,
            "fiber": 6.0,
            "name": "cornpops",
            "protein": 2.0,
            "sugar": 11.0
          },
          {
            "calories": 158.0,
            "fiber": 8.0,
            "name": "fruitrings",
            "protein": 7.0,
            "sugar": 3.0
          },
          {
            "calories": 85.0,
            "fiber": 1.0,
            "name": "granola",
            "protein": 5.0,
            "sugar": 6.0
          },
          {
            "calories": 102.0,
            "fiber": 3.0,
            "name": "honeyohs",
            "protein": 3.0,
            "sugar": 9.0
          },
          {
            "calories": 119.0,
            "fiber": 5.0,
            "name": "oatsquares",
            "protein": 1.0,
            "sugar": 12.0
          },
          {
            "calories": 136.0,
            "fiber": 7.0,
            "name": "riceclusters",
            "protein": 6.0,
            "sugar": 4.0
          },
          {
            "calories": 153.0,
            "fiber": 0.0,
            "name": "wheatbits",
            "protein": 4.0,
            "sugar": 7.0
          }
        ]
      }
    ],
    "views": [
      {
        "chart": "pcp",
        "encodings": {
          "axes": [
            "sugar",
            "protein",
            "calories",
            "fiber"
          ]
        },
        "halfExtents": [
          0.45,
          0.3,
          0.01
        ],
        "id": "pcp",
        "pose": {
          "pos": [
            0.0,
            0.0,
            0.0
          ],
          "rot": [
            0.0,
            0.0,
            0.0,
            1.0
          ],
          "scale": 1.0
        },
        "table": "cereals"
      }
    ]
  },
  "superimposed": {
    "tables": [
      {
        "columns": [
          {
            "kind": "categorical",
            "name": "name"
          },
          {
            "kind": "quantitative",
            "name": "density"
          }
        ],
        "key": "name",
        "name": "states",
        "rows": [
          {
            "density": 20.0,
            "name": "AZ"
          },
          {
            "density": 33.0,
            "name": "CO"
          },
          {
            "density": 46.0,
            "name": "NM"
          },
          {
            "density": 59.0,
            "name": "NV"
          },
          {
            "density": 72.0,
            "name": "TX"
          },
          {
            "density": 85.0,
            "name": "UT"
          }
        ]
      }
    ],
    "views": [
      {
        "chart": "map",
        "encodings": {
          "regions": [
            {
              "key": "AZ",
              "polygon": [
                [
                  -0.3,
                  -0.25
                ],
                [
                  -0.1,
                  -0.25
                ],
                [
                  -0.1,
                  0.0
                ],
                [
                  -0.3,
                  0.0
                ]
              ]
            },
            {
              "key": "CO",
              "polygon": [
                [
                  -0.1,
                  -0.25
                ],
                [
                  0.09999999999999998,
                  -0.25
                ],
                [
                  0.09999999999999998,
                  0.0
                ],
                [
                  -0.1,
                  0.0
                ]
              ]
            },
            {
              "key": "NM",
              "polygon": [
                [
                  0.09999999999999998,
                  -0.25
                ],
                [
                  0.29999999999999993,
                  -0.25
                ],
                [
                  0.29999999999999993,
                  0.0
                ],
                [
                  0.09999999999999998,
                  0.0
                ]
              ]
            },
            {
              "key": "NV",
              "polygon": [
                [
                  -0.3,
                  0.0
                ],
                [
                  -0.1,
                  0.0
                ],
                [
                  -0.1,
                  0.25
                ],
                [
                  -0.3,
                  0.25
                ]
              ]
            },
            {
              "key": "TX",
              "polygon": [
                [
                  -0.1,
                  0.0
                ],
                [
                  0.09999999999999998,
                  0.0
                ],
                [
                  0.09999999999999998,
                  0.25
                ],
                [
                  -0.1,
                  0.25
                ]
              ]
            },
            {
              "key": "UT",
              "polygon": [
                [
                  0.09999999999999998,
                  0.0
                ],
                [
                  0.29999999999999993,
                  0.0
                ],
                [
                  0.29999999999999993,
                  0.25
                ],
                [
                  0.09999999999999998,
                  0.25
                ]
              ]
            }
          ],
          "value": "density"
        },
        "halfExtents": [
          0.3,
          0.25,
          0.01
        ],
        "id": "map",
        "pose": {
          "pos": [
            0.0,
            0.8,
            0.0
          ],
          "rot": [
            -0.7071067811865475,
            0.0,
            0.0,
            0.7071067811865476
          ],
          "scale": 1.0
        },
        "table": "states"
      },
      {
        "chart": "barchart",
        "encodings": {
          "value": "density"
        },
        "halfExtents": [
          0.3,
          0.2,
          0.01
        ],
        "id": "bars",
        "pose": {
          "pos": [
            1.5,
            0.8,
            0.0
          ],
          "rot": [
            0.0,
            0.0,
            0.0,
            1.0
          ],
          "scale": 1.0
        },
        "table": "states"
      }
    ]
  }
};
