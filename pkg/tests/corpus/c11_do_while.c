int main()
{
    int x;
    int steps = 0;
    do {
        x = x - 2;
        steps++;
    } while (x > 0);
    return 0;
}
