int ok_unreachable_use() {
    int *p = malloc(4);
    free(p);
    return 0;
    int x = *p;
}
